"""Extremal noise-to-reach ratios for homotopy reconstruction.

Normalizing the reach to 1, the reconstruction hypotheses for a cloud whose
Hausdorff distance to the target space is rho collapse to a pair of
inequalities in rho (and, for the restricted-complex overlap condition, an
inner radius variable t = r/tau scanned over (0, 1]).  max_ratio finds the
largest feasible rho by bisection; feasibility is monotone decreasing in
rho, which the tests verify on explicit grids.

Two regimes are covered: "general" (covering radius delta and noise eps
both equal rho) and "noisy-asymptotic" (delta -> 0 with eps = rho).  The
printed reference values correspond to the d -> infinity convention for the
ambient dimension, where the covering factor sqrt(2(d+1)/d) becomes
sqrt(2); finite dimensions are supported for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

_KINDS = ("cech", "rips")
_REGIMES = ("general", "noisy-asymptotic")


@dataclass(frozen=True)
class RatioProblem:
    """One extremal-ratio computation.

    dim may be math.inf for the limiting convention (the one matching the
    reference constants).  scan_grid controls the inner search over t=r/tau
    for the overlap condition of the restricted complex; the Rips
    inequalities pin r/tau at the radius cap, so no scan happens there.
    noisy_covering_only drops the overlap inequality in the
    noisy-asymptotic regime, where the reference value tracks the covering
    inequality alone (keeping it is supported and shrinks the root; see the
    tests for the pinned alternative value).
    """

    complex_kind: str
    regime: str = "general"
    dim: float = math.inf
    scan_grid: int = 10_000
    noisy_covering_only: bool = True

    def __post_init__(self):
        if self.complex_kind not in _KINDS:
            raise ValueError(f"complex_kind must be one of {_KINDS}")
        if self.regime not in _REGIMES:
            raise ValueError(f"regime must be one of {_REGIMES}")
        if not (self.dim == math.inf or (self.dim == int(self.dim)
                                         and self.dim >= 1)):
            raise ValueError("dim must be a positive integer or math.inf")
        if self.scan_grid < 1000:
            raise ValueError("scan_grid must be at least 1000")

    @property
    def noisy(self):
        return self.regime == "noisy-asymptotic"


class RatioBound(float):
    """max_ratio result; infeasible marks failure already at rho = tol."""

    def __new__(cls, value, infeasible=False):
        obj = super().__new__(cls, value)
        obj.infeasible = infeasible
        return obj


@dataclass
class CurvePoint:
    rho: float
    feasible: bool
    best_slack: float
    scan_argmax: float


def _cov_factor(dim):
    """sqrt(2(d+1)/d), the covering comparison factor; sqrt(2) at d=inf."""
    return math.sqrt(2.0) if dim == math.inf else math.sqrt(
        2.0 * (dim + 1.0) / dim)


def _rips_cap(dim):
    """sqrt((d+1)/(2d)), the Rips radius cap over tau; 1/sqrt(2) at d=inf."""
    return math.sqrt(0.5) if dim == math.inf else math.sqrt(
        (dim + 1.0) / (2.0 * dim))


def _cech_overlap_slack(rho, t, noisy):
    """Slack of the restricted-complex overlap condition at radius ratio t.

    Vectorized over t; nan marks square roots leaving their domain, i.e.
    the condition is unsatisfiable at that t.
    """
    t = np.asarray(t, dtype=float)
    shrink = rho if noisy else 2.0 * rho
    lead = 0.0 if noisy else rho
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt((1.0 - rho) ** 2 - t ** 2)
        bracket = t - t ** 2 / ((1.0 - rho) + root) - shrink
        inner = t ** 2 + rho * (2.0 - rho) - 0.25 * bracket ** 2
        return t - lead - np.sqrt(inner)


def _covering_slack(rho, dim, cap_coef, noisy):
    """Slack of the shared covering condition with the radius pinned at its
    cap, r/tau = cap_coef * (1 - rho)."""
    a = cap_coef ** 2 * (1.0 - rho) ** 2
    b = rho * (2.0 - rho)
    if a - b < 0:
        return -math.inf
    first = _cov_factor(dim) * math.sqrt((a - b) / 2.0)
    p = a + b
    if 4.0 - 2.0 * p < 0:
        return -math.inf
    second = math.sqrt(2.0 * p / (2.0 + math.sqrt(4.0 - 2.0 * p)))
    lead = 0.0 if noisy else rho
    return 0.5 * (first - second) - lead


def _rips_overlap_slack(rho, dim, noisy):
    """Slack of the Rips overlap condition, radius pinned at the cap."""
    q = 0.25 * (1.0 - rho) ** 2 + rho * (2.0 - rho)
    if 1.0 - q < 0:
        return -math.inf
    rhs = _rips_cap(dim) * (1.0 - rho) - 0.5 * math.sqrt(
        2.0 * q / (1.0 + math.sqrt(1.0 - q)))
    lead = 0.0 if noisy else rho
    return rhs - lead


def _best_scan_slack(rho, problem):
    """Maximize the scanned overlap slack over t = r/tau in (0, 1]."""
    m = problem.scan_grid
    grid = np.linspace(1.0 / m, 1.0, m)
    slacks = _cech_overlap_slack(rho, grid, problem.noisy)
    if np.all(np.isnan(slacks)):
        return -math.inf, math.nan
    idx = int(np.nanargmax(slacks))
    best, best_t = float(slacks[idx]), float(grid[idx])
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, m - 1)]

    def negative(t):
        s = float(_cech_overlap_slack(rho, t, problem.noisy))
        return 1e12 if math.isnan(s) else -s

    res = minimize_scalar(negative, bounds=(lo, hi), method="bounded")
    if res.success and -res.fun > best:
        best, best_t = -res.fun, float(res.x)
    return best, best_t


def evaluate(problem: RatioProblem, rho):
    """Joint slack of the active condition pair at the given rho.

    Returns (slack, scan_argmax); the configuration is feasible iff
    slack >= 0.  scan_argmax is nan when no inner radius scan is involved
    (every Rips condition, and the covering-only noisy regime).
    """
    if problem.complex_kind == "cech":
        cov = _covering_slack(rho, problem.dim, 1.0, problem.noisy)
        if problem.noisy and problem.noisy_covering_only:
            return cov, math.nan
        scan, best_t = _best_scan_slack(rho, problem)
        return min(scan, cov), best_t
    cov = _covering_slack(rho, problem.dim, _rips_cap(problem.dim),
                          problem.noisy)
    if problem.noisy and problem.noisy_covering_only:
        return cov, math.nan
    return min(_rips_overlap_slack(rho, problem.dim, problem.noisy),
               cov), math.nan


def max_ratio(problem: RatioProblem, tol=1e-6):
    """Largest feasible rho = d_H / tau, located by bisection on (0, 0.5).

    Feasibility is downward-closed in rho (verified property), so bisection
    between a feasible and an infeasible endpoint converges to the
    supremum.  Returns 0 flagged infeasible when even rho = tol fails.
    """
    if tol < 1e-6:
        raise ValueError("tol must be at least 1e-6")
    lo = tol
    if evaluate(problem, lo)[0] < 0:
        return RatioBound(0.0, infeasible=True)
    hi = 0.5
    if evaluate(problem, hi)[0] >= 0:
        raise ValueError("feasible at rho = 0.5; search domain exhausted")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if evaluate(problem, mid)[0] >= 0:
            lo = mid
        else:
            hi = mid
    return RatioBound(lo)


def ratio_curve(problem: RatioProblem, rho_grid):
    """Feasibility diagnostics along a sorted grid of rho values."""
    rho_grid = np.asarray(rho_grid, dtype=float)
    if np.any(np.diff(rho_grid) < 0):
        raise ValueError("rho_grid must be sorted ascending")
    points = []
    for rho in rho_grid:
        slack, best_t = evaluate(problem, float(rho))
        points.append(CurvePoint(float(rho), bool(slack >= 0),
                                 float(slack), best_t))
    return points


def comparison_constants():
    """Closed-form extremal ratios from earlier reconstruction results."""
    return {
        "nsw_cech": 3.0 - math.sqrt(8.0),
        "attali_cech": (-3.0 + math.sqrt(22.0)) / 13.0,
        "attali_rips": (2.0 * math.sqrt(2.0 - math.sqrt(2.0))
                        - math.sqrt(2.0)) / (2.0 + math.sqrt(2.0)),
    }
