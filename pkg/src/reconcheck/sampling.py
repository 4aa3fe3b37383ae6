"""Sampling density machinery: (a, b) lower bounds on the uniform measure
of metric balls, Hausdorff distances between clouds and shapes, the
covering-probability simulation, and covering-number bounds.

The (a, b) constants are derived per shape from the uniform measure (arc
length, perimeter, or surface area); each derivation is sketched on the
corresponding branch of ab_model and spot-validated on a grid by
ab_condition_slack.  Covering of a curved space is always checked against
a dense reference grid (spacing at most a tenth of the smallest ball
radius) rather than exactly; the achieved grid spacing is part of the
simulation report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

_GRID_REFINE_FACTOR = 10.0
_MAX_GRID_POINTS = 1 << 18


@dataclass(frozen=True)
class SamplingModel:
    """Uniform sampling on a shape with P(B(x, eps)) >= a * eps**b.

    The lower bound is required on eps in (0, eps0]; eps0 also caps the
    admissible covering radii (window upper end 2 * eps0).
    """
    shape: object
    a: float
    b: float
    eps0: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.eps0 > 0):
            raise ValueError("a, b, eps0 must all be positive")


def ab_model(shape):
    """Derived (a, b, eps0) for the uniform measure on a known shape.

    - circle radius R: the chordal eps-ball covers an arc of angle
      4*arcsin(eps/(2R)) >= 2*eps/R, a fraction >= eps/(pi*R) of the
      circumference; a = 1/(pi*R), b = 1, valid up to the diameter.
    - sphere radius R in R^3: the cap at chordal radius eps has area
      exactly pi*eps**2, a fraction eps**2/(4R**2); a = 1/(4R**2), b = 2.
    - semicircle radius R: worst case at an endpoint, where only the
      one-sided arc of length 2R*arcsin(eps/(2R)) >= eps counts against
      total length pi*R; a = 1/(pi*R), b = 1.
    - segment length L: worst case at an endpoint, covered length
      min(eps, L) against total L; a = 1/L, b = 1.
    - square boundary side s: a point at distance t < eps from a corner
      still covers t + min(eps, s - t) >= eps of its own edge (plus a
      cross-corner bonus) against perimeter 4s; a = 1/(4s), b = 1.
    """
    kind = shape.kind
    if kind == "circle":
        r = shape.radius
        return SamplingModel(shape, 1.0 / (math.pi * r), 1.0, 2.0 * r)
    if kind == "sphere":
        if shape.ambient_dim != 3:
            raise ValueError("(a, b) constants derived only for the "
                             "2-sphere in R^3")
        r = shape.radius
        return SamplingModel(shape, 1.0 / (4.0 * r ** 2), 2.0, 2.0 * r)
    if kind == "semicircle":
        r = shape.radius
        return SamplingModel(shape, 1.0 / (math.pi * r), 1.0, 2.0 * r)
    if kind == "segment":
        return SamplingModel(shape, 1.0 / shape.length, 1.0, shape.length)
    if kind == "square-boundary":
        return SamplingModel(shape, 1.0 / (4.0 * shape.side), 1.0,
                             shape.side)
    raise ValueError(f"no (a, b) constants derived for shape kind {kind!r}")


def ab_condition_slack(model, x_count=48, eps_count=24, reference_n=8192):
    """Worst empirical slack of P(B(x, eps)) - a*eps**b over a test grid.

    P is estimated as the fraction of a dense uniform reference set inside
    the ball, so the returned slack carries a discretization error on the
    order of a few grid fractions (1/reference_n); values above minus a
    small multiple of that confirm the model.
    """
    xs = model.shape.reference_points(x_count)
    refs = model.shape.reference_points(reference_n)
    eps = np.geomspace(0.02 * model.eps0, model.eps0, eps_count)
    diff = xs[:, None, :] - refs[None, :, :]
    dists = np.sqrt(np.sum(diff * diff, axis=2))
    slack = math.inf
    for e in eps:
        phat = np.mean(dists <= e, axis=1)
        slack = min(slack, float(np.min(phat - model.a * e ** model.b)))
    return slack


def sample_with_noise(shape, n, noise, rng):
    """n uniform samples pushed off the shape by at most `noise`.

    The perturbation is uniform in the ambient ball of radius `noise`, so
    every returned point stays within `noise` of the shape.
    """
    base = shape.sample(n, rng)
    if noise == 0:
        return base
    if noise < 0:
        raise ValueError("noise must be nonnegative")
    dim = base.shape[1]
    v = rng.normal(size=(n, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    radii = noise * rng.uniform(0.0, 1.0, n) ** (1.0 / dim)
    return base + v * radii[:, None]


def hausdorff_distance(points, shape, reference_n=2048):
    """(d_H, eps, delta) between a cloud and a shape.

    eps is the farthest sample from the shape, delta the farthest shape
    point (out of reference_n dense ones) from the cloud; d_H is their max.
    """
    if reference_n < 1000:
        raise ValueError("reference_n must be at least 1000")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.size == 0:
        raise ValueError("empty cloud")
    eps = float(np.max(shape.distance_to(points)))
    refs = shape.reference_points(reference_n)
    delta = float(np.max(cKDTree(points).query(refs)[0]))
    return max(eps, delta), eps, delta


def radius_window(model, n):
    """Admissible [low, high] for the smallest covering radius at size n."""
    if n < 2:
        raise ValueError("need at least two samples")
    low = 2.0 * (math.log(n) / (model.a * n)) ** (1.0 / model.b)
    return low, 2.0 * model.eps0


@dataclass
class CoveringSimReport:
    """Covering-simulation outcome; unpacks as (empirical, bound)."""
    empirical: float
    bound: float
    n: int
    trials: int
    r_min: float
    reference_n: int
    grid_spacing: float
    covered: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter((self.empirical, self.bound))


def _reference_grid(shape, r_min):
    """Reference points with spacing at most r_min / 10 (capped size)."""
    m = 1024
    while True:
        refs = shape.reference_points(m)
        spacing = float(cKDTree(refs).query(refs, k=2)[0][:, 1].max())
        if spacing <= r_min / _GRID_REFINE_FACTOR or m >= _MAX_GRID_POINTS:
            return refs, spacing
        m *= 2


def _grid_covered(refs, samples, radii, tol=1e-12):
    tree = cKDTree(samples)
    if np.ptp(radii) == 0.0:
        d, _ = tree.query(refs)
        return bool(np.all(d <= radii[0] + tol))
    k = min(len(samples), 32)
    d, idx = tree.query(refs, k=k)
    hit = np.any(d <= radii[idx] + tol, axis=1)
    if np.all(hit):
        return True
    rest = refs[~hit]
    diff = rest[:, None, :] - samples[None, :, :]
    dists = np.sqrt(np.sum(diff * diff, axis=2))
    return bool(np.all(np.any(dists <= radii[None, :] + tol, axis=1)))


def covering_probability_sim(model, n, radius_rule, trials, seed=0):
    """Empirical probability that n uniform samples cover the shape.

    radius_rule is either a per-point radius array (or scalar) or a
    callable n -> radii.  The smallest radius must land in the admissible
    window [2*(log n/(a n))**(1/b), 2*eps0].  The returned report unpacks
    as (empirical, bound) with bound = 1 - 1/(2**b * log n); for n >= 100
    the simulation asserts empirical >= bound - 3 * binomial stderr (for
    smaller n the bound is recorded but known to be weak, so it is not
    enforced).
    """
    radii = radius_rule(n) if callable(radius_rule) else radius_rule
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (n,)).copy()
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    r_min = float(radii.min())
    low, high = radius_window(model, n)
    if r_min < low - 1e-12 or r_min > high + 1e-12:
        raise ValueError(f"smallest radius {r_min:.6g} outside the "
                         f"admissible window [{low:.6g}, {high:.6g}]")
    refs, spacing = _reference_grid(model.shape, r_min)
    covered = np.zeros(trials, dtype=bool)
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.default_rng(child)
        covered[t] = _grid_covered(refs, model.shape.sample(n, rng), radii)
    empirical = float(covered.mean())
    bound = 1.0 - 1.0 / (2.0 ** model.b * math.log(n))
    if n >= 100:
        stderr = math.sqrt(max(bound * (1.0 - bound), 0.0) / trials)
        assert empirical >= bound - 3.0 * stderr, (
            f"covering probability {empirical:.4f} fell below "
            f"{bound:.4f} - 3*{stderr:.4f}")
    return CoveringSimReport(empirical, bound, n, trials, r_min,
                             len(refs), spacing, covered)


def covering_number_bound(model, eps):
    """Upper bound a**-1 * eps**-b on the 2*eps covering number."""
    if not 0 < eps < model.eps0:
        raise ValueError("eps must lie in (0, eps0)")
    return eps ** -model.b / model.a


def greedy_net(shape, radius, reference_n=4096):
    """Greedy net on a dense grid: centers whose radius-balls cover it.

    Used as the constructive companion to covering_number_bound: the net
    returned for radius 2*eps has size at most the bound.
    """
    refs = shape.reference_points(reference_n)
    uncovered = np.ones(len(refs), dtype=bool)
    centers = []
    while uncovered.any():
        c = refs[int(np.argmax(uncovered))]
        centers.append(c)
        uncovered &= np.linalg.norm(refs - c, axis=1) > radius
    return np.array(centers)
