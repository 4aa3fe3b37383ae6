"""Weighted Rips and Cech complexes over point clouds with per-point radii.

Conventions:

* all balls are open: a Rips edge needs ||x_i - x_j|| < r_i + r_j strictly,
  and a Cech simplex needs the scaled-ball minimum to be < 1 (checked with a
  small certification margin);
* simplices are sorted integer tuples, listed in (dimension, lex) order, and
  every complex is face-closed with all vertices present.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.spatial.distance import cdist

from .geometry import INTERSECT_TOL, min_scaled_ball


@dataclass
class PointCloud:
    """A finite ordered point set with optional per-point radii."""

    points: np.ndarray
    radii: np.ndarray | None = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.radii is not None:
            self.radii = np.asarray(self.radii, dtype=float).ravel()
            if self.radii.shape[0] != self.points.shape[0]:
                raise ValueError("radii length must match point count")
            if np.any(self.radii <= 0) or not np.all(np.isfinite(self.radii)):
                raise ValueError("radii must be positive and finite")

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def with_radii(self, radii) -> "PointCloud":
        r = np.broadcast_to(np.asarray(radii, dtype=float), (self.n,)).copy()
        return PointCloud(self.points.copy(), r)

    def scaled_radii(self, factor) -> "PointCloud":
        if self.radii is None:
            raise ValueError("cloud has no radii")
        return PointCloud(self.points.copy(), self.radii * factor)


@dataclass
class SimplicialComplex:
    """Face-closed simplex list over vertices 0..n_vertices-1."""

    n_vertices: int
    simplices: list = field(default_factory=list)
    max_dim: int = 0

    def __post_init__(self):
        self.simplices = [tuple(s) for s in self.simplices]
        self._index = set(self.simplices)

    def __contains__(self, simplex):
        return tuple(sorted(simplex)) in self._index

    def simplices_of_dim(self, k):
        return [s for s in self.simplices if len(s) == k + 1]

    def counts(self):
        out = [0] * (self.max_dim + 1)
        for s in self.simplices:
            out[len(s) - 1] += 1
        return out

    def euler_characteristic(self):
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def is_face_closed(self):
        for s in self.simplices:
            if len(s) == 1:
                continue
            for drop in range(len(s)):
                if s[:drop] + s[drop + 1:] not in self._index:
                    return False
        return True

    def to_text(self):
        lines = [f"complex n={self.n_vertices} maxdim={self.max_dim}"]
        for s in self.simplices:
            lines.append(" ".join(str(v) for v in s))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("complex "):
            raise ValueError("missing complex header")
        header = dict(tok.split("=") for tok in lines[0].split()[1:])
        simplices = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
        return cls(n_vertices=int(header["n"]), simplices=simplices,
                   max_dim=int(header["maxdim"]))


def _sorted_simplex_list(by_dim):
    out = []
    for k in sorted(by_dim):
        out.extend(sorted(by_dim[k]))
    return out


def _adjacency_masks(points, radii, strict_margin=0.0):
    """Bit-mask adjacency of the open-overlap graph ||x_i-x_j|| < r_i+r_j."""
    D = cdist(points, points)
    limit = (radii[:, None] + radii[None, :]) * (1.0 - strict_margin)
    A = (D < limit)
    np.fill_diagonal(A, False)
    masks = []
    for i in range(len(points)):
        m = 0
        for j in np.nonzero(A[i])[0]:
            m |= 1 << int(j)
        masks.append(m)
    return masks


def _expand_cliques(n, masks, max_dim):
    """All cliques of the masked graph up to max_dim, grouped by dimension."""
    by_dim = {0: [(i,) for i in range(n)]}
    if max_dim == 0:
        return by_dim
    frontier = []
    for i in range(n):
        higher = masks[i] >> (i + 1)
        j = i + 1
        while higher:
            if higher & 1:
                frontier.append(((i, j), masks[i] & masks[j]))
            higher >>= 1
            j += 1
    if frontier:
        by_dim[1] = [s for s, _ in frontier]
    dim = 1
    while dim < max_dim and frontier:
        nxt = []
        for simplex, common in frontier:
            last = simplex[-1]
            cand = common >> (last + 1)
            v = last + 1
            while cand:
                if cand & 1:
                    nxt.append((simplex + (v,), common & masks[v]))
                cand >>= 1
                v += 1
        dim += 1
        if nxt:
            by_dim[dim] = [s for s, _ in nxt]
        frontier = nxt
    return by_dim


def build_rips(cloud: PointCloud, max_dim=None) -> SimplicialComplex:
    """Clique complex of the graph with an edge iff ||x_i-x_j|| < r_i + r_j."""
    if cloud.radii is None:
        raise ValueError("Rips complex needs per-point radii")
    if max_dim is None:
        max_dim = cloud.dim + 1
    masks = _adjacency_masks(cloud.points, cloud.radii)
    by_dim = _expand_cliques(cloud.n, masks, max_dim)
    top = max(by_dim)
    return SimplicialComplex(cloud.n, _sorted_simplex_list(by_dim), top)


def build_cech_ambient(cloud: PointCloud, max_dim=None,
                       tol=INTERSECT_TOL) -> SimplicialComplex:
    """Nerve of the open ambient balls B(x_i, r_i).

    Edges coincide with overlap tests; higher simplices are certified through
    the scaled-ball minimum (< 1 - tol accepts).  Candidates are drawn from
    the Rips graph and pruned facet-first, which is valid because the Cech
    complex is a face-closed subcomplex of the Rips complex.
    """
    if cloud.radii is None:
        raise ValueError("Cech complex needs per-point radii")
    if max_dim is None:
        max_dim = cloud.dim + 1
    pts, rad = cloud.points, cloud.radii
    masks = _adjacency_masks(pts, rad, strict_margin=tol)
    by_dim = {0: [(i,) for i in range(cloud.n)]}
    edges = []
    for i in range(cloud.n):
        m = masks[i] >> (i + 1)
        j = i + 1
        while m:
            if m & 1:
                edges.append((i, j))
            m >>= 1
            j += 1
    if edges:
        by_dim[1] = edges
    witnesses = {}
    for (i, j) in edges:
        witnesses[(i, j)] = pts[i] + (pts[j] - pts[i]) * (rad[i] / (rad[i] + rad[j]))

    prev = edges
    dim = 1
    while dim < max_dim and prev:
        prev_set = set(prev)
        nxt = []
        seen = set()
        for simplex in prev:
            common = masks[simplex[0]]
            for v in simplex[1:]:
                common &= masks[v]
            cand = common >> (simplex[-1] + 1)
            v = simplex[-1] + 1
            while cand:
                if cand & 1:
                    candidate = simplex + (v,)
                    if candidate not in seen:
                        seen.add(candidate)
                        faces = [candidate[:d] + candidate[d + 1:]
                                 for d in range(len(candidate))]
                        if all(f in prev_set for f in faces):
                            nxt.append((candidate, faces))
                cand >>= 1
                v += 1
        accepted = []
        for candidate, faces in nxt:
            idx = list(candidate)
            sub_pts, sub_rad = pts[idx], rad[idx]
            probe = [witnesses[f] for f in faces if f in witnesses]
            probe.append((1.0 / sub_rad) @ sub_pts / np.sum(1.0 / sub_rad))
            ok = False
            for y in probe:
                val = float(np.max(np.linalg.norm(sub_pts - y, axis=1) / sub_rad))
                if val < 1.0 - tol:
                    witnesses[candidate] = y
                    ok = True
                    break
            if not ok:
                ball = min_scaled_ball(sub_pts, sub_rad)
                if ball.value < 1.0 - tol:
                    witnesses[candidate] = ball.center
                    ok = True
            if ok:
                accepted.append(candidate)
        dim += 1
        if accepted:
            by_dim[dim] = accepted
        prev = accepted
    top = max(by_dim)
    return SimplicialComplex(cloud.n, _sorted_simplex_list(by_dim), top)


def build_cech_restricted(cloud: PointCloud, shape, max_dim=None,
                          method=None, tol=INTERSECT_TOL) -> SimplicialComplex:
    """Nerve of the restricted balls {y in the target space: ||y-x_i|| < r_i}.

    method picks the nonempty-intersection test: "exact-arcs" (circles,
    semicircles, and polyline shapes, via exact interval arithmetic),
    "constrained-opt" (spheres, via certified projected search), or
    "grid-scan" (dense reference points with a Lipschitz rejection bound).
    By default the shape chooses its own exact method.

    Every restricted ball must be nonempty (distance_to(x_i) < r_i); the
    offending index is reported otherwise.
    """
    from . import restricted

    if cloud.radii is None:
        raise ValueError("Cech complex needs per-point radii")
    if max_dim is None:
        max_dim = cloud.dim + 1
    pts, rad = cloud.points, cloud.radii
    for i in range(cloud.n):
        if not shape.distance_to(pts[i]) < rad[i]:
            raise ValueError(
                f"restricted ball of point {i} is empty "
                f"(distance {shape.distance_to(pts[i]):.6g} >= radius {rad[i]:.6g})")
    tester = restricted.intersection_tester(shape, method, tol)

    by_dim = {0: [(i,) for i in range(cloud.n)]}
    prev = []
    for i, j in combinations(range(cloud.n), 2):
        if tester([i, j], pts, rad):
            prev.append((i, j))
    if prev:
        by_dim[1] = prev
    dim = 1
    while dim < max_dim and prev:
        prev_set = set(prev)
        nxt = []
        seen = set()
        for simplex in prev:
            for v in range(simplex[-1] + 1, cloud.n):
                candidate = simplex + (v,)
                if candidate in seen:
                    continue
                seen.add(candidate)
                faces = [candidate[:d] + candidate[d + 1:]
                         for d in range(len(candidate))]
                if all(f in prev_set for f in faces):
                    if tester(list(candidate), pts, rad):
                        nxt.append(candidate)
        dim += 1
        if nxt:
            by_dim[dim] = nxt
        prev = nxt
    top = max(by_dim)
    return SimplicialComplex(cloud.n, _sorted_simplex_list(by_dim), top)


def is_subcomplex(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    """True iff every simplex of a appears in b (same vertex set required)."""
    if a.n_vertices != b.n_vertices:
        raise ValueError("vertex sets differ")
    return all(s in b._index for s in a.simplices)
