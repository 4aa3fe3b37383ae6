import json
import math

import numpy as np
import pytest

from reconcheck.conditions import (ReconstructionInput, check_cech_theorem,
                                   check_mureach_corollary,
                                   check_rips_theorem, interleave_cech_radius,
                                   interleave_rips_radius, nerve_radius_bound,
                                   rips_cech_factor)


def test_nerve_radius_bound_values():
    assert nerve_radius_bound(1.0, 0.0) == pytest.approx(math.sqrt(2.0))
    assert nerve_radius_bound(1.0, 1.0) == pytest.approx(1.0)
    assert nerve_radius_bound(2.0, 0.5) == pytest.approx(2.5)


def test_nerve_radius_bound_domain():
    with pytest.raises(ValueError):
        nerve_radius_bound(1.0, 1.2)
    with pytest.raises(ValueError):
        nerve_radius_bound(1.0, -0.1)


def test_nerve_radius_bound_decreasing_in_dist():
    dists = np.linspace(0.0, 1.0, 40)
    vals = [nerve_radius_bound(1.0, t) for t in dists]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_interleave_cech_radius_values():
    assert interleave_cech_radius(0.5, 0.0, 1.0) == pytest.approx(
        math.sqrt(0.5))
    assert interleave_cech_radius(0.5, 0.1, 1.0) == pytest.approx(
        math.sqrt(0.69))
    with pytest.raises(ValueError):
        interleave_cech_radius(0.5, 1.0, 1.0)


def test_interleave_rips_radius_values():
    # in dimension 1 the Rips-to-Cech blowup is exactly sqrt(2)
    assert interleave_rips_radius(0.5, 0.0, 1.0, 1) == pytest.approx(
        math.sqrt(2.0) * 0.5)
    assert interleave_rips_radius(0.3, 0.2, 1.0, 3) == pytest.approx(
        math.sqrt(3.0 * 0.09 + 0.2 * 1.8))
    with pytest.raises(ValueError):
        interleave_rips_radius(0.5, 1.1, 1.0, 2)


def test_interleave_radii_monotone():
    rs = np.linspace(0.05, 0.9, 30)
    vals = [interleave_cech_radius(r, 0.05, 1.0) for r in rs]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    dists = np.linspace(0.0, 0.9, 30)
    vals = [interleave_rips_radius(0.4, t, 1.0, 2) for t in dists]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_rips_cech_factor():
    assert rips_cech_factor(1) == pytest.approx(1.0)
    assert rips_cech_factor(2) == pytest.approx(math.sqrt(4.0 / 3.0))
    assert rips_cech_factor(10 ** 6) == pytest.approx(math.sqrt(2.0),
                                                     abs=1e-6)


def test_input_validation():
    with pytest.raises(ValueError):
        ReconstructionInput(1.0, 2, 1.0, 0.1, 0.5, 0.5)   # eps >= tau
    with pytest.raises(ValueError):
        ReconstructionInput(1.0, 2, 0.0, 0.0, 0.5, 0.5)   # delta == 0
    with pytest.raises(ValueError):
        ReconstructionInput(1.0, 2, 0.0, 0.1, 0.6, 0.5)   # r_min > r_max


def test_cech_clean_sample_satisfies_all():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.001,
                              r_min=0.5, r_max=0.5)
    report = check_cech_theorem(inp)
    assert report.all_satisfied
    assert [iq.label for iq in report.inequalities] == [
        "radius", "overlap", "covering"]
    assert all(iq.slack > 0 for iq in report.inequalities)


def test_cech_radius_cap_fails():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.001,
                              r_min=0.5, r_max=1.01)
    report = check_cech_theorem(inp)
    assert not report["radius"].ok
    assert not report.all_satisfied


def test_cech_noisy_sparse_sample_fails():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.2, delta=0.3,
                              r_min=0.5, r_max=0.5)
    report = check_cech_theorem(inp)
    assert not report.all_satisfied
    # r_min^2 < eps (2 tau - eps) makes the covering condition unsatisfiable
    assert math.isnan(report["covering"].rhs)
    assert not report["covering"].ok


def test_report_json_schema():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.001,
                              r_min=0.5, r_max=0.5)
    payload = json.loads(check_cech_theorem(inp).to_json())
    assert set(payload) == {"name", "inequalities", "all_satisfied"}
    assert payload["name"] == "cech-reconstruction"
    assert payload["all_satisfied"] is True
    for row in payload["inequalities"]:
        assert set(row) == {"label", "lhs", "rhs", "ok"}


def test_rips_radius_cap():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.01,
                              r_min=0.6, r_max=0.6)
    report = check_rips_theorem(inp)
    assert report["radius"].rhs == pytest.approx(math.sqrt(3.0) / 2.0)
    assert report.all_satisfied
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.01,
                              r_min=0.9, r_max=0.9)
    assert not check_rips_theorem(inp)["radius"].ok


def test_rips_sparse_sample_fails_covering():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.5,
                              r_min=0.6, r_max=0.6)
    report = check_rips_theorem(inp)
    assert not report["overlap"].ok
    assert not report["covering"].ok


def _random_input(rng):
    tau = rng.uniform(0.5, 3.0)
    eps = rng.uniform(0.0, 0.4) * tau
    r_max = rng.uniform(0.05, 0.95) * tau
    r_min = r_max * rng.uniform(0.3, 1.0)
    delta = rng.uniform(0.001, 0.5) * tau
    return ReconstructionInput(tau, int(rng.integers(1, 5)), eps, delta,
                               r_min, r_max)


def _flags(report):
    return tuple(iq.ok for iq in report.inequalities)


def test_scale_invariance():
    rng = np.random.default_rng(20240819)
    for _ in range(100):
        inp = _random_input(rng)
        for c in (0.1, 10.0):
            assert _flags(check_cech_theorem(inp)) == _flags(
                check_cech_theorem(inp.scaled(c)))
            assert _flags(check_rips_theorem(inp)) == _flags(
                check_rips_theorem(inp.scaled(c)))
            for variant in ("cech", "rips"):
                rep, _ = check_mureach_corollary(inp, 0.7, variant)
                rep_c, _ = check_mureach_corollary(inp.scaled(c), 0.7,
                                                   variant)
                assert _flags(rep) == _flags(rep_c)


def test_exact_sample_always_satisfiable():
    # with no noise and a dense enough sample every radius below tau works
    for tau in (1.0, 3.0):
        for r in np.linspace(0.01, 0.99, 50) * tau:
            inp = ReconstructionInput(tau, 2, 0.0, 1e-12 * tau, r, r)
            assert check_cech_theorem(inp).all_satisfied, r
        for r in np.linspace(0.01, 0.86, 50) * tau:
            inp = ReconstructionInput(tau, 2, 0.0, 1e-12 * tau, r, r)
            assert check_rips_theorem(inp).all_satisfied, r


def test_mureach_returns_induced_reach():
    inp = ReconstructionInput(tau=2.0, dim=2, eps=0.05, delta=0.01,
                              r_min=0.6, r_max=0.8)
    report, rho = check_mureach_corollary(inp, 0.5)
    assert rho == pytest.approx(0.85)
    assert report.inequalities[0].label == "offset-reach"
    assert report["offset-reach"].ok  # 0.85 <= 0.5 * 2.0


def test_mureach_precondition_failure():
    inp = ReconstructionInput(tau=2.0, dim=2, eps=0.05, delta=0.01,
                              r_min=0.6, r_max=1.2)
    report, rho = check_mureach_corollary(inp, 0.5, variant="rips")
    assert rho == pytest.approx(1.25)
    assert not report["offset-reach"].ok
    assert not report.all_satisfied


def test_mureach_rejects_bad_arguments():
    inp = ReconstructionInput(tau=1.0, dim=2, eps=0.0, delta=0.01,
                              r_min=0.5, r_max=0.5)
    with pytest.raises(ValueError):
        check_mureach_corollary(inp, 0.0)
    with pytest.raises(ValueError):
        check_mureach_corollary(inp, 1.2)
    with pytest.raises(ValueError):
        check_mureach_corollary(inp, 0.5, variant="alpha")
    with pytest.raises(ValueError):
        check_mureach_corollary(inp, 0.5, tau_convention="mixed")


def test_mureach_substituted_matches_reach_checkers():
    # replacing the leftover tau by the induced reach rho = r_max + eps must
    # reproduce the reach-based inequalities evaluated at tau = rho; dyadic
    # parameters keep both evaluation orders exact, so the comparison is not
    # thrown off by rounding at the (tau - eps)^2 = r_max^2 boundary
    rng = np.random.default_rng(20240820)
    for _ in range(50):
        tau = rng.integers(64, 192) / 64.0
        eps = rng.integers(0, 5) / 64.0
        r_max = rng.integers(8, 40) / 64.0
        r_min = r_max * rng.integers(2, 5) / 4.0
        delta = rng.integers(1, 10) / 64.0
        inp = ReconstructionInput(tau, int(rng.integers(1, 4)), eps, delta,
                                  r_min, r_max)
        rho = r_max + eps
        ref = ReconstructionInput(rho, inp.dim, eps, delta, r_min, r_max)
        for variant, checker in (("cech", check_cech_theorem),
                                 ("rips", check_rips_theorem)):
            rep, _ = check_mureach_corollary(inp, 1.0, variant,
                                             tau_convention="substituted")
            want = checker(ref)
            for label in ("overlap", "covering"):
                got = rep[label]
                exp = want[label]
                for a, b in ((got.lhs, exp.lhs), (got.rhs, exp.rhs)):
                    if math.isnan(a) or math.isnan(b):
                        assert math.isnan(a) and math.isnan(b)
                    else:
                        assert a == pytest.approx(b, abs=1e-12)


def test_mureach_conventions_differ_off_identity():
    inp = ReconstructionInput(tau=2.0, dim=2, eps=0.05, delta=0.01,
                              r_min=0.6, r_max=0.8)
    lit, _ = check_mureach_corollary(inp, 0.5, "cech", "literal")
    sub, _ = check_mureach_corollary(inp, 0.5, "cech", "substituted")
    assert lit["covering"].rhs != pytest.approx(sub["covering"].rhs)
    # the overlap row has no leftover tau, so the conventions agree there
    assert lit["overlap"].lhs == pytest.approx(sub["overlap"].lhs)
