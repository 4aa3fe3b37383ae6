"""Closed-form hypothesis checks for recovering the homotopy type of a
positive-reach (or positive mu-reach) set from a union of balls.

Each checker summarizes a weighted cloud by (tau, dim, eps, delta, r_min,
r_max) and evaluates the radius cap plus the two covering inequalities of
the corresponding reconstruction guarantee, reporting per-inequality slack.
Square-root arguments going negative mark the inequality as unsatisfiable
instead of raising, so feasibility scans over these reports are total.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ReconstructionInput:
    """Summary parameters of a weighted sample of a target space.

    tau is the reach (or the mu-reach, for the double-offset corollary),
    dim the ambient dimension, eps the largest distance from a sample to
    the space, delta the covering radius, and r_min/r_max the extreme ball
    radii.
    """

    tau: float
    dim: int
    eps: float
    delta: float
    r_min: float
    r_max: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if not 0 <= self.eps < self.tau:
            raise ValueError("eps must lie in [0, tau)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0 < self.r_min <= self.r_max:
            raise ValueError("need 0 < r_min <= r_max")
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")

    def scaled(self, c):
        """The same configuration with all lengths multiplied by c."""
        return ReconstructionInput(self.tau * c, self.dim, self.eps * c,
                                   self.delta * c, self.r_min * c,
                                   self.r_max * c)


@dataclass
class Inequality:
    label: str
    lhs: float
    rhs: float

    @property
    def ok(self):
        return bool(self.lhs <= self.rhs)

    @property
    def slack(self):
        return self.rhs - self.lhs


@dataclass
class ConditionReport:
    name: str
    inequalities: list = field(default_factory=list)

    @property
    def all_satisfied(self):
        return all(iq.ok for iq in self.inequalities)

    def __getitem__(self, label):
        for iq in self.inequalities:
            if iq.label == label:
                return iq
        raise KeyError(label)

    def as_dict(self):
        return {"name": self.name,
                "inequalities": [{"label": iq.label, "lhs": iq.lhs,
                                  "rhs": iq.rhs, "ok": iq.ok}
                                 for iq in self.inequalities],
                "all_satisfied": self.all_satisfied}

    def to_json(self, indent=None):
        return json.dumps(self.as_dict(), indent=indent)


def _sqrt(x):
    """Square root that signals out-of-domain with nan (comparisons with
    nan are false, so the enclosing inequality reads as unsatisfiable)."""
    return math.sqrt(x) if x >= 0 else math.nan


def nerve_radius_bound(tau, dist):
    """Largest radius at which restricted-ball intersections are still
    guaranteed contractible for a sample at the given distance."""
    if not 0 <= dist <= tau:
        raise ValueError("dist must lie in [0, tau]")
    return math.sqrt(tau ** 2 + (tau - dist) ** 2)


def interleave_cech_radius(r, dist, tau):
    """Radius at which the ambient Cech complex captures the restricted
    one: r' = sqrt(2 r^2 + dist (2 tau - dist))."""
    if dist >= tau:
        raise ValueError("dist must be below tau")
    return math.sqrt(2.0 * r * r + dist * (2.0 * tau - dist))


def interleave_rips_radius(r, dist, tau, dim):
    """Radius at which the ambient Cech complex captures the Rips complex:
    r'' = sqrt(4 dim/(dim+1) r^2 + dist (2 tau - dist))."""
    if dist >= tau:
        raise ValueError("dist must be below tau")
    return math.sqrt(4.0 * dim / (dim + 1.0) * r * r
                     + dist * (2.0 * tau - dist))


def rips_cech_factor(dim):
    """Scaling factor nesting a Rips complex into a Cech complex."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return math.sqrt(2.0 * dim / (dim + 1.0))


def _covering_rhs(dim, r_min, first_eps_term, tau_bare, second_eps_term,
                  four_sq):
    """Right-hand side of the shared covering-radius inequality.

    first_eps_term sits under the first square root with r_min^2;
    tau_bare, second_eps_term, and four_sq fill the respective slots of the
    second square root (they differ between the reach-based checks and the
    two conventions of the double-offset variant)."""
    a = _sqrt(2.0 * (dim + 1.0) / dim) * _sqrt((r_min ** 2 - first_eps_term)
                                               / 2.0)
    inner = four_sq - 2.0 * (r_min ** 2 + second_eps_term)
    b = _sqrt(2.0 * tau_bare * (r_min ** 2 + second_eps_term)
              / (2.0 * tau_bare + _sqrt(inner)))
    return 0.5 * (a - b)


def check_cech_theorem(inp: ReconstructionInput) -> ConditionReport:
    """Hypotheses under which the ambient Cech complex of the cloud has the
    homotopy type of the target space (reach tau)."""
    tau, d, eps, delta = inp.tau, inp.dim, inp.eps, inp.delta
    r_min, r_max = inp.r_min, inp.r_max
    rows = [Inequality("radius", r_max, tau - eps)]

    eps_term = eps * (2.0 * tau - eps)
    denom = tau - eps + _sqrt((tau - eps) ** 2 - r_max ** 2)
    bracket = r_min - r_max ** 2 / denom - eps - delta
    lhs = delta + _sqrt(r_max ** 2 + eps_term - 0.25 * bracket ** 2)
    rows.append(Inequality("overlap", lhs, r_min))

    rhs = _covering_rhs(d, r_min, eps_term, tau, eps_term, 4.0 * tau ** 2)
    rows.append(Inequality("covering", delta, rhs))
    return ConditionReport("cech-reconstruction", rows)


def check_rips_theorem(inp: ReconstructionInput) -> ConditionReport:
    """Hypotheses under which the Rips complex of the cloud has the
    homotopy type of the target space (reach tau)."""
    tau, d, eps, delta = inp.tau, inp.dim, inp.eps, inp.delta
    r_min, r_max = inp.r_min, inp.r_max
    rows = [Inequality("radius", r_max,
                       math.sqrt((d + 1.0) / (2.0 * d)) * (tau - eps))]

    eps_term = eps * (2.0 * tau - eps)
    q = d / (2.0 * (d + 1.0)) * r_max ** 2 + eps_term
    rhs = r_min - 0.5 * _sqrt(2.0 * tau * q / (tau + _sqrt(tau ** 2 - q)))
    rows.append(Inequality("overlap", delta, rhs))

    rhs = _covering_rhs(d, r_min, eps_term, tau, eps_term, 4.0 * tau ** 2)
    rows.append(Inequality("covering", delta, rhs))
    return ConditionReport("rips-reconstruction", rows)


def check_mureach_corollary(inp: ReconstructionInput, mu, variant="cech",
                            tau_convention="literal"):
    """Hypotheses for reconstruction when only the mu-reach is positive,
    working through the double offset of the target space.

    The double offset peels the (r_max+eps)/mu offset back by r_max+eps,
    which leaves a set with reach at least rho = r_max+eps; the pair
    (report, rho) is returned.  The printed covering conditions keep a bare
    tau in two slots of the second square root; tau_convention picks its
    meaning: "literal" reads it as the mu-reach passed in, "substituted"
    replaces it by rho (making every row agree with the reach-based
    checkers at tau = rho).
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must lie in (0, 1]")
    if variant not in ("cech", "rips"):
        raise ValueError("variant must be 'cech' or 'rips'")
    if tau_convention not in ("literal", "substituted"):
        raise ValueError("tau_convention must be 'literal' or 'substituted'")
    tau, d, eps, delta = inp.tau, inp.dim, inp.eps, inp.delta
    r_min, r_max = inp.r_min, inp.r_max
    rho = r_max + eps
    tau_bare = tau if tau_convention == "literal" else rho
    eps_term = eps * (2.0 * r_max + eps)

    rows = [Inequality("offset-reach", rho, mu * tau)]
    if variant == "cech":
        bracket = r_min - r_max - eps - delta
        lhs = delta + _sqrt(r_max ** 2 + eps_term - 0.25 * bracket ** 2)
        rows.append(Inequality("overlap", lhs, r_min))
        second = eps * (2.0 * tau_bare - eps)
        rhs = _covering_rhs(d, r_min, eps_term, tau_bare, second,
                            4.0 * rho ** 2)
        rows.append(Inequality("covering", delta, rhs))
    else:
        q = d / (2.0 * (d + 1.0)) * r_max ** 2 + eps_term
        rhs = r_min - 0.5 * _sqrt(2.0 * rho * q / (rho + _sqrt(rho ** 2 - q)))
        rows.append(Inequality("overlap", delta, rhs))
        rhs = _covering_rhs(d, r_min, eps_term, tau_bare, eps_term,
                            4.0 * tau_bare ** 2)
        rows.append(Inequality("covering", delta, rhs))
    report = ConditionReport(f"mureach-{variant}-reconstruction", rows)
    return report, rho
