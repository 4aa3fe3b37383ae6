"""Euclidean primitives shared by the complex builders and inequality oracles.

Three things live here:

* the exact distance identity for a convex combination of points,
* a solver for the smallest scaled enclosing ball, i.e. the minimizer of
  f(y) = max_i ||x_i - y|| / r_i  over y in R^d,
* open-ball common-intersection tests built on that solver (a family of open
  balls shares a point iff the minimum of f is < 1).

The solver runs a subgradient phase with a Polyak step (cheap, certifiable
upper bound) and then refines exactly by enumerating candidate active sets of
size 2..d+1, solving the equal-scaled-distance system for each, and keeping
the candidates that pass a global-coverage check and a KKT check.  For the
point counts used here (k <= ~10) this is fast and exact to roundoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

SOLVER_TOL = 1e-9
INTERSECT_TOL = 1e-7


def barycenter_distance_identity(x, points, weights):
    """Evaluate both sides of

        ||sum_i w_i p_i - x|| = sqrt( sum_i w_i ||p_i - x||^2
                                      - sum_{i<j} w_i w_j ||p_i - p_j||^2 )

    and return (lhs, rhs).  The pair sum runs over unordered pairs i < j;
    that is the convention under which the identity is exact.
    """
    x = np.asarray(x, dtype=float).ravel()
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.asarray(weights, dtype=float).ravel()
    if pts.shape[1] != x.shape[0]:
        raise ValueError("dimension mismatch between x and points")
    if w.shape[0] != pts.shape[0]:
        raise ValueError("one weight per point required")
    if np.any(w < -1e-12) or np.any(w > 1 + 1e-12) or abs(float(w.sum()) - 1.0) > 1e-9:
        raise ValueError("weights must be a convex combination (w_i in [0,1], sum 1)")
    lhs = float(np.linalg.norm(w @ pts - x))
    first = float(w @ np.sum((pts - x) ** 2, axis=1))
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.sum(diff * diff, axis=2)
    pair = 0.5 * float(w @ d2 @ w)  # diagonal is zero; halving undoes the double count
    rhs = math.sqrt(max(first - pair, 0.0))
    return lhs, rhs


@dataclass(frozen=True)
class MinScaledBall:
    """Minimizer of f(y) = max_i ||x_i - y|| / r_i.

    value is f(center); certified_tol bounds |value - true minimum|.
    """

    center: np.ndarray
    value: float
    certified_tol: float


def _scaled_value(pts, radii, y):
    return float(np.max(np.linalg.norm(pts - y, axis=1) / radii)) if len(pts) else 0.0


def _dedupe(pts, radii):
    """Drop coordinate duplicates, keeping the smallest radius (the binding one)."""
    order = np.lexsort(np.vstack([radii, pts.T[::-1]]))
    keep = []
    for idx in order:
        if keep and np.array_equal(pts[keep[-1]], pts[idx]):
            continue
        keep.append(idx)
    keep = np.asarray(keep)
    return pts[keep], radii[keep]


def _pairwise_lower_bound(pts, radii):
    # f(y) >= (||y-x_i|| + ||y-x_j||) / (r_i + r_j) >= ||x_i - x_j|| / (r_i + r_j)
    if len(pts) < 2:
        return 0.0
    best = 0.0
    for i, j in combinations(range(len(pts)), 2):
        best = max(best, float(np.linalg.norm(pts[i] - pts[j]) / (radii[i] + radii[j])))
    return best


def _subgradient_phase(pts, radii, tol, iters=200):
    w = (1.0 / radii) / np.sum(1.0 / radii)
    y = w @ pts
    lower = _pairwise_lower_bound(pts, radii)
    best_y, best_f = y.copy(), _scaled_value(pts, radii, y)
    for _ in range(iters):
        dists = np.linalg.norm(pts - y, axis=1) / radii
        i = int(np.argmax(dists))
        f = float(dists[i])
        if f < best_f:
            best_f, best_y = f, y.copy()
        if f - lower <= tol:
            break
        gap = np.linalg.norm(pts[i] - y)
        if gap == 0.0:
            break
        g = (y - pts[i]) / (radii[i] * gap)
        step = (f - lower) / float(g @ g)
        y = y - step * g
    return best_y, best_f, lower


def _candidate_centers(pts, radii, subset):
    """Equal-scaled-distance points for one candidate active set.

    Solving ||y - x_i||^2 = s r_i^2 for all i in the subset, with y in the
    affine hull of the subset, reduces to w(s) = w0 - s*w1 and a scalar
    quadratic in s = t^2.  Returns a list of (t, y) candidates.
    """
    x0 = pts[subset[0]]
    rest = list(subset[1:])
    V = pts[rest] - x0  # rows
    G = V @ V.T
    b = np.diag(G).copy()
    rho = radii[rest] ** 2 - radii[subset[0]] ** 2
    try:
        w0 = 0.5 * np.linalg.solve(G, b)
        w1 = 0.5 * np.linalg.solve(G, rho)
    except np.linalg.LinAlgError:
        return []
    r0sq = float(radii[subset[0]] ** 2)
    a = float(w1 @ G @ w1)
    bq = 2.0 * float(w0 @ G @ w1) + r0sq
    c = float(w0 @ G @ w0)
    out = []
    if abs(a) < 1e-300:
        roots = [c / bq] if bq != 0.0 else []
    else:
        disc = bq * bq - 4.0 * a * c
        if disc < 0.0:
            if disc > -1e-9 * max(bq * bq, 1.0):
                disc = 0.0
            else:
                return []
        sq = math.sqrt(disc)
        roots = [(bq + sq) / (2 * a), (bq - sq) / (2 * a)]
    for s in roots:
        if not math.isfinite(s) or s < -1e-12:
            continue
        s = max(s, 0.0)
        y = x0 + (w0 - s * w1) @ V
        out.append((math.sqrt(s), y))
    return out


def _kkt_ok(pts, radii, subset, y, t):
    """0 must lie in the convex hull of the active gradients u_i."""
    if t <= 0.0:
        return True
    U = []
    for i in subset:
        g = y - pts[i]
        n = np.linalg.norm(g)
        if n < 1e-14:
            return True  # center coincides with a point; only possible at t ~ 0
        U.append(g / (radii[i] * n))
    U = np.asarray(U).T  # d x m
    m = U.shape[1]
    A = np.vstack([U, np.ones((1, m))])
    e = np.zeros(A.shape[0])
    e[-1] = 1.0
    lam, *_ = np.linalg.lstsq(A, e, rcond=None)
    if np.any(lam < -1e-6):
        return False
    resid = A @ lam - e
    return float(np.linalg.norm(resid)) <= 1e-6


def min_scaled_ball(points, radii, tol=SOLVER_TOL):
    """Minimize f(y) = max_i ||x_i - y|| / r_i over y.

    Returns a MinScaledBall whose value is within tol of the true minimum and
    whose center lies in the convex hull of the inputs.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rad = np.asarray(radii, dtype=float).ravel()
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    if rad.shape[0] != pts.shape[0]:
        raise ValueError("one radius per point required")
    if np.any(rad <= 0.0) or not np.all(np.isfinite(rad)):
        raise ValueError("radii must be positive and finite")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    work_pts, work_rad = _dedupe(pts, rad)
    if len(work_pts) == 1:
        center = work_pts[0].copy()
        return MinScaledBall(center=center, value=_scaled_value(pts, rad, center),
                             certified_tol=0.0)

    y_sub, f_sub, lower = _subgradient_phase(work_pts, work_rad, tol)

    k, d = work_pts.shape
    best_t, best_y = None, None
    scale = float(np.max(np.linalg.norm(work_pts - work_pts[0], axis=1))) + 1.0
    for m in range(2, min(k, d + 1) + 1):
        for subset in combinations(range(k), m):
            for t, y in _candidate_centers(work_pts, work_rad, subset):
                if best_t is not None and t >= best_t - 1e-15:
                    continue
                fy = _scaled_value(work_pts, work_rad, y)
                if fy > t * (1.0 + 1e-9) + 1e-12 * scale:
                    continue  # some ball not covered: subset is not the active set
                if not _kkt_ok(work_pts, work_rad, subset, y, t):
                    continue
                best_t, best_y = t, y

    if best_y is None or f_sub < (best_t if best_t is not None else math.inf) - tol:
        # Enumeration should always win; keep the subgradient answer as a
        # safety net with its honest certificate.
        center = y_sub
        value = f_sub
        cert = max(f_sub - lower, 0.0)
    else:
        center = best_y
        value = _scaled_value(pts, rad, best_y)
        cert = 1e-12 + 1e-9 * value
    return MinScaledBall(center=np.asarray(center, dtype=float), value=value,
                         certified_tol=cert)


def balls_have_common_point(points, radii, tol=INTERSECT_TOL):
    """True iff the open balls B(x_i, r_i) share a point.

    Open-ball semantics: the intersection is declared nonempty only when the
    scaled-ball minimum is < 1 - tol; tangency (min == 1) is empty.
    """
    ball = min_scaled_ball(points, radii)
    return bool(ball.value < 1.0 - tol)
