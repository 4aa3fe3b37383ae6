"""Reference target spaces with exact distance/projection oracles, plus
grid-sampled distance fields, offsets, double offsets, and a generalized
gradient / mu-reach estimator.

Every analytic shape exposes:

* ``distance_to(x)``: exact distance, vectorized over leading axes;
* ``project(x)``: the nearest point, raising ``NonUniqueProjectionError``
  on the medial axis;
* ``nearest_set(x)``: a finite representative subset of the nearest points
  (same smallest enclosing ball as the full nearest set);
* ``grad_norms(points, tie_tol)``: batch generalized-gradient norms used by
  the mu-reach estimator;
* sampling helpers, reference point grids, known Betti numbers, reach.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .complexes import PointCloud
from .geometry import min_scaled_ball


class NonUniqueProjectionError(ValueError):
    """Raised when the nearest point on the shape is not unique."""


def _norm(x):
    return np.linalg.norm(x, axis=-1)


def _as_batch(x):
    x = np.asarray(x, dtype=float)
    single = (x.ndim == 1)
    return (x[None, :] if single else x), single


# ---------------------------------------------------------------------------
# analytic shapes


class Shape:
    kind = "abstract"
    ambient_dim = 2

    def distance_to(self, x):
        raise NotImplementedError

    def project(self, x):
        raise NotImplementedError

    def contains(self, x, tol=1e-9):
        return bool(self.distance_to(np.asarray(x, dtype=float)) <= tol)

    def nearest_set(self, x, tol=1e-9):
        return [self.project(x)]

    def reach(self):
        raise NotImplementedError

    def known_betti(self):
        raise NotImplementedError

    def bounding_box(self):
        raise NotImplementedError

    def reference_points(self, m):
        raise NotImplementedError

    def grad_norms(self, points, tie_tol):
        raise NotImplementedError


class Circle(Shape):
    """Circle of radius R centered at the origin of the plane."""

    kind = "circle"

    def __init__(self, radius=1.0):
        self.radius = float(radius)

    def distance_to(self, x):
        return np.abs(_norm(np.asarray(x, dtype=float)) - self.radius)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        n = float(_norm(x))
        if n <= 1e-12 * self.radius:
            raise NonUniqueProjectionError("center of the circle")
        return x * (self.radius / n)

    def nearest_set(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        if float(_norm(x)) <= tol * self.radius:
            return list(self.reference_points(64))
        return [self.project(x)]

    def reach(self):
        return self.radius

    def known_betti(self):
        return (1, 1)

    def bounding_box(self):
        r = self.radius
        return np.array([-r, -r]), np.array([r, r])

    def reference_points(self, m):
        t = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)

    def grad_norms(self, points, tie_tol):
        out = np.ones(len(points))
        out[_norm(points) <= tie_tol] = 0.0
        return out

    def sample(self, n, rng):
        t = rng.uniform(0.0, 2.0 * np.pi, n)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)

    def normal_directions(self, pts):
        return pts / _norm(pts)[:, None]


class Sphere(Shape):
    """Sphere of radius R centered at the origin of R^d (default d=3)."""

    kind = "sphere"

    def __init__(self, radius=1.0, ambient_dim=3):
        self.radius = float(radius)
        self.ambient_dim = int(ambient_dim)
        if self.ambient_dim < 2:
            raise ValueError("ambient dimension must be >= 2")

    def distance_to(self, x):
        return np.abs(_norm(np.asarray(x, dtype=float)) - self.radius)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        n = float(_norm(x))
        if n <= 1e-12 * self.radius:
            raise NonUniqueProjectionError("center of the sphere")
        return x * (self.radius / n)

    def nearest_set(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        if float(_norm(x)) <= tol * self.radius:
            return list(self.reference_points(256))
        return [self.project(x)]

    def reach(self):
        return self.radius

    def known_betti(self):
        b = [1] + [0] * (self.ambient_dim - 2) + [1]
        return tuple(b)

    def bounding_box(self):
        r = self.radius
        return -r * np.ones(self.ambient_dim), r * np.ones(self.ambient_dim)

    def reference_points(self, m):
        if self.ambient_dim == 2:
            t = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
            return self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
        if self.ambient_dim == 3:
            i = np.arange(m)
            z = 1.0 - (2.0 * i + 1.0) / m
            rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
            theta = np.pi * (3.0 - math.sqrt(5.0)) * i
            pts = np.stack([rho * np.cos(theta), rho * np.sin(theta), z], axis=1)
            return self.radius * pts
        rng = np.random.default_rng(12345)
        pts = rng.normal(size=(m, self.ambient_dim))
        return self.radius * pts / _norm(pts)[:, None]

    def grad_norms(self, points, tie_tol):
        out = np.ones(len(points))
        out[_norm(points) <= tie_tol] = 0.0
        return out

    def sample(self, n, rng):
        pts = rng.normal(size=(n, self.ambient_dim))
        return self.radius * pts / _norm(pts)[:, None]

    def normal_directions(self, pts):
        return pts / _norm(pts)[:, None]


class Semicircle(Shape):
    """Closed upper half of the circle of radius R (endpoints included)."""

    kind = "semicircle"

    def __init__(self, radius=1.0):
        self.radius = float(radius)
        self.endpoints = np.array([[self.radius, 0.0], [-self.radius, 0.0]])

    def _candidate_distances(self, pts):
        """Distances to (arc interior, endpoint +R, endpoint -R)."""
        r = _norm(pts)
        on_upper = pts[:, 1] >= 0.0
        arc = np.where(on_upper & (r > 0), np.abs(r - self.radius), np.inf)
        arc = np.where(r == 0.0, self.radius, arc)
        d1 = _norm(pts - self.endpoints[0])
        d2 = _norm(pts - self.endpoints[1])
        return np.stack([arc, d1, d2], axis=1)

    def distance_to(self, x):
        b, single = _as_batch(x)
        d = self._candidate_distances(b).min(axis=1)
        return d[0] if single else d

    def project(self, x):
        x = np.asarray(x, dtype=float)
        cand = self._candidate_points(x)
        d = _norm(np.asarray(cand) - x)
        order = np.argsort(d)
        if len(cand) > 1 and d[order[1]] - d[order[0]] <= 1e-9 * self.radius:
            raise NonUniqueProjectionError("equidistant nearest points")
        return cand[order[0]]

    def _candidate_points(self, x):
        cand = [self.endpoints[0].copy(), self.endpoints[1].copy()]
        n = float(_norm(x))
        if n > 1e-12 * self.radius and x[1] >= 0.0:
            cand.insert(0, x * (self.radius / n))
        elif n <= 1e-12 * self.radius:
            return list(self.reference_points(64))
        return cand

    def nearest_set(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        cand = self._candidate_points(x)
        d = _norm(np.asarray(cand) - x)
        keep = d <= d.min() + tol * max(1.0, self.radius)
        out = [c for c, k in zip(cand, keep) if k]
        uniq = []
        for c in out:
            if not any(np.allclose(c, u, atol=1e-9) for u in uniq):
                uniq.append(c)
        return uniq

    def reach(self):
        return self.radius

    def known_betti(self):
        return (1, 0)

    def bounding_box(self):
        r = self.radius
        return np.array([-r, 0.0]), np.array([r, r])

    def reference_points(self, m):
        t = np.linspace(0.0, np.pi, m)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)

    def grad_norms(self, points, tie_tol):
        cand = self._candidate_distances(points)
        dmin = cand.min(axis=1)
        ties = (cand <= (dmin + tie_tol)[:, None]).sum(axis=1)
        out = np.ones(len(points))
        near_center = _norm(points) <= tie_tol
        out[near_center] = 0.0
        multi = np.nonzero((ties > 1) & ~near_center)[0]
        for i in multi:
            gamma = np.asarray(self.nearest_set(points[i], tol=tie_tol))
            if len(gamma) < 2:
                continue
            theta = min_scaled_ball(gamma, np.ones(len(gamma))).center
            d = float(self.distance_to(points[i]))
            out[i] = min(1.0, float(np.linalg.norm(points[i] - theta)) / d)
        return out

    def sample(self, n, rng):
        t = rng.uniform(0.0, np.pi, n)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)

    def normal_directions(self, pts):
        return pts / _norm(pts)[:, None]


def _segment_feet(pts, a, b):
    """Foot of each point on segment [a, b] and the distance to it."""
    ab = b - a
    denom = float(ab @ ab)
    t = np.clip(((pts - a) @ ab) / denom, 0.0, 1.0)
    feet = a + t[:, None] * ab
    return feet, _norm(pts - feet)


class _PolylineShape(Shape):
    """Shared machinery for shapes made of straight segments."""

    def segments(self):
        raise NotImplementedError

    def distance_to(self, x):
        b, single = _as_batch(x)
        d = np.full(len(b), np.inf)
        for a, c in self.segments():
            d = np.minimum(d, _segment_feet(b, a, c)[1])
        return d[0] if single else d

    def _feet_and_dists(self, pts):
        feet, dists = [], []
        for a, c in self.segments():
            f, d = _segment_feet(pts, a, c)
            feet.append(f)
            dists.append(d)
        return np.stack(feet, axis=1), np.stack(dists, axis=1)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        feet, dists = self._feet_and_dists(x[None, :])
        feet, dists = feet[0], dists[0]
        order = np.argsort(dists)
        best = feet[order[0]]
        scale = max(1.0, float(np.abs(x).max()))
        for k in order[1:]:
            if dists[k] - dists[order[0]] > 1e-9 * scale:
                break
            if np.linalg.norm(feet[k] - best) > 1e-9 * scale:
                raise NonUniqueProjectionError("equidistant nearest points")
        return best

    def nearest_set(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        feet, dists = self._feet_and_dists(x[None, :])
        feet, dists = feet[0], dists[0]
        keep = dists <= dists.min() + tol
        uniq = []
        for f in feet[keep]:
            if not any(np.allclose(f, u, atol=1e-9) for u in uniq):
                uniq.append(f)
        return uniq

    def grad_norms(self, points, tie_tol):
        feet, dists = self._feet_and_dists(points)
        dmin = dists.min(axis=1)
        ties = (dists <= (dmin + tie_tol)[:, None]).sum(axis=1)
        out = np.ones(len(points))
        for i in np.nonzero(ties > 1)[0]:
            sel = dists[i] <= dmin[i] + tie_tol
            uniq = []
            for f in feet[i][sel]:
                if not any(np.linalg.norm(f - u) <= 1e-9 for u in uniq):
                    uniq.append(f)
            if len(uniq) < 2:
                continue
            gamma = np.asarray(uniq)
            theta = min_scaled_ball(gamma, np.ones(len(gamma))).center
            out[i] = min(1.0, float(np.linalg.norm(points[i] - theta)) / dmin[i])
        return out


class Segment(_PolylineShape):
    """Straight segment from the origin to (length, 0)."""

    kind = "segment"

    def __init__(self, length=1.0):
        self.length = float(length)
        self.a = np.zeros(2)
        self.b = np.array([self.length, 0.0])

    def segments(self):
        return [(self.a, self.b)]

    def project(self, x):
        x = np.asarray(x, dtype=float)
        return _segment_feet(x[None, :], self.a, self.b)[0][0]

    def reach(self):
        return np.inf

    def known_betti(self):
        return (1, 0)

    def bounding_box(self):
        return np.array([0.0, 0.0]), np.array([self.length, 0.0])

    def reference_points(self, m):
        t = np.linspace(0.0, 1.0, m)
        return self.a + t[:, None] * (self.b - self.a)

    def grad_norms(self, points, tie_tol):
        return np.ones(len(points))

    def sample(self, n, rng):
        t = rng.uniform(0.0, 1.0, n)
        return self.a + t[:, None] * (self.b - self.a)

    def normal_directions(self, pts):
        return np.tile(np.array([0.0, 1.0]), (len(pts), 1))


class SquareBoundary(_PolylineShape):
    """Boundary of the axis-aligned square of the given side, centered at 0."""

    kind = "square-boundary"

    def __init__(self, side=2.0):
        self.side = float(side)
        h = self.side / 2.0
        self.corners = np.array([[-h, -h], [h, -h], [h, h], [-h, h]])

    def segments(self):
        c = self.corners
        return [(c[i], c[(i + 1) % 4]) for i in range(4)]

    def reach(self):
        return 0.0

    def mu_reach(self, mu):
        # inner medial branches have gradient norm 1/sqrt(2); only the
        # center survives below that threshold
        if mu <= 1.0 / math.sqrt(2.0):
            return self.side / 2.0
        return 0.0

    def known_betti(self):
        return (1, 1)

    def bounding_box(self):
        h = self.side / 2.0
        return np.array([-h, -h]), np.array([h, h])

    def reference_points(self, m):
        per = max(2, m // 4)
        out = []
        for a, b in self.segments():
            t = np.linspace(0.0, 1.0, per, endpoint=False)
            out.append(a + t[:, None] * (b - a))
        return np.concatenate(out, axis=0)

    def sample(self, n, rng):
        u = rng.uniform(0.0, 4.0, n)
        seg = np.minimum(u.astype(int), 3)
        t = u - seg
        segs = self.segments()
        pts = np.empty((n, 2))
        for k in range(4):
            sel = seg == k
            a, b = segs[k]
            pts[sel] = a + t[sel, None] * (b - a)
        return pts

    def normal_directions(self, pts):
        # outward normal of the side each point lies on (corners get the
        # normal of one incident side; they have sampling measure zero)
        h = self.side / 2.0
        out = np.zeros_like(pts)
        on_bottom = np.isclose(pts[:, 1], -h)
        on_top = np.isclose(pts[:, 1], h)
        on_right = np.isclose(pts[:, 0], h) & ~on_bottom & ~on_top
        on_left = np.isclose(pts[:, 0], -h) & ~on_bottom & ~on_top
        out[on_bottom] = [0.0, -1.0]
        out[on_top] = [0.0, 1.0]
        out[on_right] = [1.0, 0.0]
        out[on_left] = [-1.0, 0.0]
        return out


class TwoSegments(_PolylineShape):
    """Two unit segments sharing the origin, opening at the given angle."""

    kind = "two-segments"

    def __init__(self, angle=np.pi / 2):
        self.angle = float(angle)
        if not 0.0 < self.angle < np.pi:
            raise ValueError("angle must lie in (0, pi)")
        self.a = np.zeros(2)
        self.b1 = np.array([1.0, 0.0])
        self.b2 = np.array([math.cos(self.angle), math.sin(self.angle)])

    def segments(self):
        return [(self.a, self.b1), (self.a, self.b2)]

    def reach(self):
        return 0.0

    def mu_reach(self, mu):
        # the inner bisector carries gradient norm sin(angle/2)
        if mu <= math.sin(self.angle / 2.0):
            return np.inf
        return 0.0

    def known_betti(self):
        return (1, 0)

    def bounding_box(self):
        pts = np.stack([self.a, self.b1, self.b2])
        return pts.min(axis=0), pts.max(axis=0)

    def reference_points(self, m):
        per = max(2, m // 2)
        t = np.linspace(0.0, 1.0, per)
        return np.concatenate([self.a + t[:, None] * (self.b1 - self.a),
                               self.a + t[:, None] * (self.b2 - self.a)])

    def sample(self, n, rng):
        t = rng.uniform(0.0, 1.0, n)
        which = rng.integers(0, 2, n)
        ends = np.where(which[:, None] == 0, self.b1, self.b2)
        return t[:, None] * ends

    def normal_directions(self, pts):
        on_first = np.abs(pts[:, 1]) <= 1e-12
        n1 = np.array([0.0, 1.0])
        n2 = np.array([-math.sin(self.angle), math.cos(self.angle)])
        return np.where(on_first[:, None], n1, n2)


# ---------------------------------------------------------------------------
# sampled distance fields


@dataclass
class GridField:
    """Scalar samples on a regular grid: values[i0, i1, ...] sits at
    origin + spacing * (i0, i1, ...)."""

    origin: np.ndarray
    spacing: float
    values: np.ndarray

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.origin.shape[0] != self.values.ndim:
            raise ValueError("origin dimension must match grid rank")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    @property
    def shape(self):
        return self.values.shape

    def cell_centers(self):
        axes = [self.origin[k] + self.spacing * np.arange(self.values.shape[k])
                for k in range(self.values.ndim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def interpolate(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        coords = (pts - self.origin).T / self.spacing
        return ndimage.map_coordinates(self.values, coords, order=1,
                                       mode="nearest")

    def to_text(self):
        dims = " ".join(str(d) for d in self.values.shape)
        org = " ".join(f"{c:.17g}" for c in self.origin)
        lines = [f"grid {dims} spacing={self.spacing:.17g} origin={org}"]
        flat = self.values.reshape(-1, self.values.shape[-1])
        for row in flat:
            lines.append(" ".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("grid "):
            raise ValueError("missing grid header")
        head = lines[0].split()
        dims, spacing, origin = [], None, []
        it = iter(head[1:])
        for tok in it:
            if tok.startswith("spacing="):
                spacing = float(tok.split("=", 1)[1])
            elif tok.startswith("origin="):
                origin.append(float(tok.split("=", 1)[1]))
                origin.extend(float(t) for t in it)
            else:
                dims.append(int(tok))
        if spacing is None or len(origin) != len(dims):
            raise ValueError("malformed grid header")
        vals = np.array([float(t) for ln in lines[1:] for t in ln.split()])
        if vals.size != int(np.prod(dims)):
            raise ValueError("grid payload size mismatch")
        return cls(np.array(origin), spacing, vals.reshape(dims))


class Grid(Shape):
    """Shape defined implicitly by a sampled unsigned distance field."""

    kind = "grid"

    def __init__(self, field: GridField, known_reach=np.nan):
        self.field = field
        self.known_reach = float(known_reach)
        self.ambient_dim = field.values.ndim

    def distance_to(self, x):
        b, single = _as_batch(x)
        d = self.field.interpolate(b)
        return float(d[0]) if single else d

    def project(self, x, iters=40):
        y = np.asarray(x, dtype=float).copy()
        h = self.field.spacing
        for _ in range(iters):
            d = float(self.field.interpolate(y)[0])
            if d <= h / 4.0:
                break
            g = np.zeros_like(y)
            for k in range(len(y)):
                e = np.zeros_like(y)
                e[k] = h / 2.0
                g[k] = (self.field.interpolate(y + e)[0]
                        - self.field.interpolate(y - e)[0]) / h
            gn = float(np.linalg.norm(g))
            if gn < 1e-6:
                break
            y = y - (d / gn) * (g / gn)
        return y

    def contains(self, x, tol=None):
        if tol is None:
            tol = self.field.spacing / 2.0
        return bool(self.distance_to(np.asarray(x, dtype=float)) <= tol)

    def reach(self):
        return self.known_reach

    def known_betti(self):
        return None

    def bounding_box(self):
        lo = self.field.origin
        hi = lo + self.field.spacing * (np.array(self.field.shape) - 1)
        return lo.copy(), hi

    def reference_points(self, m=None):
        centers = self.field.cell_centers()
        near = self.field.values.ravel() <= self.field.spacing
        return centers[near]

    def grad_norms(self, points, tie_tol):
        h = self.field.spacing
        g = np.zeros((len(points), self.ambient_dim))
        for k in range(self.ambient_dim):
            e = np.zeros(self.ambient_dim)
            e[k] = h / 2.0
            g[:, k] = (self.field.interpolate(points + e)
                       - self.field.interpolate(points - e)) / h
        return np.clip(_norm(g), 0.0, 1.0)


# ---------------------------------------------------------------------------
# gradient / mu-reach estimation


@dataclass
class GradientEstimate:
    """Generalized gradient of the distance function at a point off the
    shape: direction (x - theta)/d with theta the center of the smallest
    ball enclosing the nearest points."""

    point: np.ndarray
    theta: np.ndarray
    norm: float
    nearest: list


def gradient_estimate(shape, x, tol=1e-9) -> GradientEstimate:
    x = np.asarray(x, dtype=float)
    d = float(shape.distance_to(x))
    if d <= 0.0:
        raise ValueError("gradient is defined off the shape only")
    gamma = shape.nearest_set(x, tol=tol)
    if len(gamma) == 1:
        theta = np.asarray(gamma[0], dtype=float)
    else:
        theta = min_scaled_ball(np.asarray(gamma), np.ones(len(gamma))).center
    norm = min(1.0, float(np.linalg.norm(x - theta)) / d)
    return GradientEstimate(point=x, theta=theta, norm=norm, nearest=gamma)


class CensoredValue(float):
    """Float that carries a flag marking window-censored estimates."""

    def __new__(cls, value, censored=False):
        obj = super().__new__(cls, value)
        obj.censored = bool(censored)
        return obj


def estimate_mu_reach(shape, mu, resolution=256, pad_factor=0.75):
    """Grid estimate of the mu-reach: the least distance-to-shape among grid
    points whose generalized gradient norm falls below mu.

    The search window is the bounding box padded by pad_factor times its
    largest extent.  If no gradient norm drops below mu inside the window,
    or the minimizer touches the window edge, the result is flagged as
    censored (the true value may exceed the window).
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must lie in (0, 1]")
    lo, hi = shape.bounding_box()
    extent = float(np.max(hi - lo))
    if extent <= 0:
        extent = 1.0
    lo = lo - pad_factor * extent
    hi = hi + pad_factor * extent
    h = float(np.max(hi - lo)) / resolution
    axes = [np.arange(lo[k], hi[k] + h / 2.0, h) for k in range(len(lo))]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    dist = shape.distance_to(pts)
    off = dist > 1.5 * h
    if not np.any(off):
        return CensoredValue(np.inf, censored=True)
    grads = np.ones(len(pts))
    grads[off] = shape.grad_norms(pts[off], tie_tol=1.5 * h)
    medial = off & (grads < mu)
    if not np.any(medial):
        return CensoredValue(np.inf, censored=True)
    idx = np.nonzero(medial)[0]
    best = idx[np.argmin(dist[idx])]
    value = float(dist[best])
    edge = np.any(np.abs(pts[best] - lo) <= 1.5 * h) or \
        np.any(np.abs(pts[best] - hi) <= 1.5 * h)
    return CensoredValue(value, censored=bool(edge))


# ---------------------------------------------------------------------------
# offsets and double offsets


def _offset_grid_geometry(shape, reach_out, resolution):
    lo, hi = shape.bounding_box()
    span = float(np.max(hi - lo)) + 2.0 * reach_out
    h = span / resolution
    lo = lo - reach_out - 2.0 * h
    hi = hi + reach_out + 2.0 * h
    dims = np.floor((hi - lo) / h).astype(int) + 1
    # build centers exactly as GridField.cell_centers will reconstruct them
    axes = [lo[k] + h * np.arange(dims[k]) for k in range(len(lo))]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    dist = np.asarray(shape.distance_to(pts)).reshape(mesh[0].shape)
    return lo, h, dist


def offset_field(shape, r, resolution=256) -> GridField:
    """Occupancy grid of the open offset {x : d(x, shape) < r}.

    Cell centers are classified with the exact distance oracle.  The spacing
    must resolve the offset radius (h <= r/8), otherwise a ValueError is
    raised asking for a finer resolution.
    """
    if r <= 0:
        raise ValueError("offset radius must be positive")
    lo, h, dist = _offset_grid_geometry(shape, r, resolution)
    if h > r / 8.0:
        raise ValueError(
            f"resolution too coarse: spacing {h:.4g} exceeds r/8 = {r / 8:.4g}")
    return GridField(lo, h, (dist < r).astype(float))


def double_offset_field(shape, r, s, resolution=256,
                        closure_margin=0.75) -> GridField:
    """Occupancy grid of the double offset: grow by r, then peel the closed
    complement back by s (erosion of the r-offset).

    A cell survives when its Euclidean distance to the complement of the
    r-offset is at least s minus closure_margin grid cells; the margin keeps
    measure-zero limit sets (e.g. s = r around a circle) from vanishing
    between cell centers.
    """
    if r <= 0 or s <= 0:
        raise ValueError("offset radii must be positive")
    if s > r:
        raise ValueError("peeling radius s must not exceed r")
    lo, h, dist = _offset_grid_geometry(shape, r + s, resolution)
    if h > min(r, s) / 8.0:
        raise ValueError(
            f"resolution too coarse: spacing {h:.4g} exceeds min(r,s)/8 = "
            f"{min(r, s) / 8:.4g}")
    inside = dist < r
    depth = ndimage.distance_transform_edt(inside, sampling=h)
    occ = depth >= s - closure_margin * h
    return GridField(lo, h, occ.astype(float))


# ---------------------------------------------------------------------------
# sampling


def sample_uniform(shape, n, rng_seed=0) -> PointCloud:
    """n points drawn uniformly (w.r.t. arc length / area) on the shape."""
    rng = np.random.default_rng(rng_seed)
    return PointCloud(shape.sample(n, rng))


def sample_with_noise(shape, n, eps, rng_seed=0) -> PointCloud:
    """Uniform samples displaced along the normal by U(-eps, eps); the
    distance of each sample to the shape is at most eps by construction."""
    if eps < 0:
        raise ValueError("noise amplitude must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    pts = shape.sample(n, rng)
    if eps == 0:
        return PointCloud(pts)
    normals = shape.normal_directions(pts)
    t = rng.uniform(-eps, eps, n)
    return PointCloud(pts + t[:, None] * normals)
