"""Independent brute-force oracles used to freeze expected values.

These deliberately share no code with the package: grid refinement, dense
linear algebra, and exhaustive enumeration only.
"""
import numpy as np


from itertools import combinations


def _refine_on_affine(pts, rad, base, basis, rounds, per_axis):
    """Grid refinement of max_i ||y-x_i||/r_i over an affine slice
    y = base + basis @ c.  Returns (best_c, best_value).

    The window never shrinks below the distance the incumbent just moved:
    along a flat valley the incumbent drifts by more than a cell per round,
    and a blindly shrinking window would strand the true minimizer outside.
    Once moves drop below a cell the window collapses quickly.
    """
    coords = (pts - base) @ basis.T  # each point's coordinates in the slice
    lo = coords.min(axis=0) - 0.1
    hi = coords.max(axis=0) + 0.1
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    best_c, best_f = center.copy(), np.inf
    for _ in range(rounds):
        axes = [np.linspace(c - h, c + h, per_axis) for c, h in zip(center, half)]
        mesh = np.meshgrid(*axes, indexing="ij")
        grid_c = np.stack(mesh, axis=-1).reshape(-1, len(center))
        grid = base + grid_c @ basis
        d = np.linalg.norm(grid[:, None, :] - pts[None, :, :], axis=2) / rad
        f = d.max(axis=1)
        i = int(np.argmin(f))
        moved = 0.0
        if f[i] < best_f:
            moved = float(np.max(np.abs(grid_c[i] - best_c)))
            best_f, best_c = float(f[i]), grid_c[i].copy()
        center = best_c
        cell = 2.0 * half / (per_axis - 1)
        shrink = 0.45 if moved <= float(np.max(cell)) else 0.7
        half = np.maximum(shrink * half, 1.5 * moved + 0.5 * cell)
    return best_c, best_f


def grid_refine_min_scaled_ball(points, radii, rounds=24):
    """Minimize max_i ||y-x_i||/r_i: grid refinement plus a generic polish.

    Phase 1 (global): grid refinement inside the affine hull of every
    candidate active set of size <= d+1 — the minimizer always lies in one of
    those slices, and the slices keep the search low-dimensional.
    Phase 2 (local): scipy SLSQP on the epigraph form  min t  s.t.
    r_i t >= ||y - x_i||  from the best grid point.  The objective is convex,
    so the local polish converges to the global optimum; the grid phase only
    needs to land in a sane region.  A pure fixed-window grid cannot certify
    1e-6 here (two-ball lens valleys are quadratically flat), hence the
    polish.
    """
    from scipy.optimize import minimize

    pts = np.asarray(points, dtype=float)
    rad = np.asarray(radii, dtype=float)
    k, dim = pts.shape

    def full_value(y):
        return float(np.max(np.linalg.norm(pts - y, axis=1) / rad))

    best_y, best_f = pts[0].copy(), full_value(pts[0])
    for i in range(1, k):
        f = full_value(pts[i])
        if f < best_f:
            best_f, best_y = f, pts[i].copy()
    per_axis_by_dim = {1: 33, 2: 13, 3: 7, 4: 5}
    for m in range(2, min(k, dim + 1) + 1):
        for subset in combinations(range(k), m):
            sub = pts[list(subset)]
            base = sub[0]
            V = sub[1:] - base
            # orthonormal basis of the affine hull; skip degenerate subsets
            q, r = np.linalg.qr(V.T)
            keep = np.abs(np.diag(r)) > 1e-12
            if not np.any(keep):
                continue
            basis = q.T[keep]
            c, _ = _refine_on_affine(sub, rad[list(subset)], base, basis,
                                     rounds, per_axis_by_dim[int(keep.sum())])
            y = base + c @ basis
            f = full_value(y)
            if f < best_f:
                best_f, best_y = f, y

    def neg_constraints(z):
        y, t = z[:dim], z[dim]
        return t * rad - np.linalg.norm(pts - y, axis=1)

    z0 = np.concatenate([best_y, [best_f + 1e-7]])
    res = minimize(lambda z: z[dim], z0, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": neg_constraints}],
                   options={"maxiter": 300, "ftol": 1e-14})
    if res.success or res.status in (0, 4, 8):
        y_pol = res.x[:dim]
        f_pol = full_value(y_pol)
        if f_pol < best_f:
            best_f, best_y = f_pol, y_pol
    return best_y, best_f


def dense_betti_gf2(simplices):
    """Betti numbers by dense GF(2) boundary-matrix ranks (small complexes only)."""
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    if not by_dim:
        return []
    top = max(by_dim)
    index = {k: {s: i for i, s in enumerate(sorted(set(v)))} for k, v in by_dim.items()}
    counts = {k: len(v) for k, v in index.items()}

    def boundary_rank(k):
        if k == 0 or k not in index or (k - 1) not in index:
            return 0
        rows, cols = counts[k - 1], counts[k]
        M = np.zeros((rows, cols), dtype=np.uint8)
        for s, j in index[k].items():
            for drop in range(len(s)):
                face = s[:drop] + s[drop + 1:]
                M[index[k - 1][face], j] = 1
        return gf2_rank(M)

    ranks = {k: boundary_rank(k) for k in range(top + 2)}
    betti = []
    for k in range(top + 1):
        n_k = counts.get(k, 0)
        betti.append(n_k - ranks[k] - ranks.get(k + 1, 0))
    return betti


def gf2_rank(M):
    M = M.copy() % 2
    rank = 0
    rows, cols = M.shape
    for j in range(cols):
        pivots = np.nonzero(M[rank:, j])[0]
        if len(pivots) == 0:
            continue
        p = rank + pivots[0]
        M[[rank, p]] = M[[p, rank]]
        elim = np.nonzero(M[:, j])[0]
        for i in elim:
            if i != rank:
                M[i] ^= M[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def circle_arc_has_common_point(angles, half_widths):
    """Whether open arcs {|theta - a_i| < w_i} on the unit circle all intersect.

    Dense-scan reference used to validate the exact interval arithmetic.
    """
    thetas = np.linspace(-np.pi, np.pi, 400000, endpoint=False)
    ok = np.ones_like(thetas, dtype=bool)
    for a, w in zip(angles, half_widths):
        diff = np.angle(np.exp(1j * (thetas - a)))
        ok &= np.abs(diff) < w
    return bool(np.any(ok))
