import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warpedeinstein import (CausalClass, DomainError, Profile, ProfilePair, ResidualReport,
                            Signature, WarpedGeometry, bakry_emery_residual, classify_direction,
                            conformal_metric, constant_field, flat_fiber_oracle, flat_metric,
                            lift_profiles, linear_field, ode_residual_null, ode_residuals_nonnull,
                            pde_from_ode, pde_residuals, random_smooth_field)
from warpedeinstein.einstein import constant_profile, exp_profile
from warpedeinstein.solutions import Thm13Params, exp_example_phi, thm13_profiles

from conftest import random_signature, random_unit_direction


def flat_pair():
    return ProfilePair(constant_profile(1.0), constant_profile(1.0))


def poly_profile(coeffs):
    """Polynomial ``sum c_k xi^k`` with exact derivatives."""
    p = np.polynomial.Polynomial(coeffs)
    d1, d2 = p.deriv(1), p.deriv(2)
    return Profile(lambda x: (p(x), d1(x), d2(x)), name=f"poly {coeffs}")


# -- directions ----------------------------------------------------------------

def test_classify_spacelike_rescales():
    d = classify_direction([2.0, 0, 0], Signature((1, 1, 1)))
    assert d.kind is CausalClass.UNIT and d.sign == 1
    np.testing.assert_allclose(d.alpha, [1, 0, 0])


def test_classify_null():
    d = classify_direction([1, 1, 0], Signature((-1, 1, 1)))
    assert d.is_null and d.sign == 0


def test_classify_timelike():
    d = classify_direction([1.0, 0, 0, 0], Signature((-1, 1, 1, 1)))
    assert d.kind is CausalClass.UNIT and d.sign == -1


def test_classify_exact_rationals():
    eps = Signature((-1, 1, 1, 1))
    alpha = [Fraction(5, 13), Fraction(3, 13), Fraction(4, 13), 0]
    assert classify_direction(alpha, eps).is_null
    # the same vector in floats misses exact zero but is caught by the tolerance
    assert classify_direction([float(a) for a in alpha], eps).is_null


def test_classify_zero_vector():
    with pytest.raises(DomainError):
        classify_direction([0, 0, 0], Signature((1, 1, 1)))
    with pytest.raises(DomainError):
        classify_direction([0.0, 0.0, 0.0], Signature((1, 1, 1)))


vectors = st.lists(st.floats(-10, 10, allow_nan=False), min_size=4, max_size=4)
signs = st.lists(st.sampled_from([-1, 1]), min_size=4, max_size=4)


@given(vectors, signs, st.floats(0.01, 100))
@settings(max_examples=200, deadline=None)
def test_normalization_idempotent_and_scale_invariant(alpha, eps, c):
    eps = Signature(tuple(eps))
    if abs(eps.array() @ np.square(alpha)) < 1e-6:
        return
    d = classify_direction(alpha, eps)
    again = classify_direction(d.alpha, eps)
    np.testing.assert_allclose(again.alpha, d.alpha, rtol=1e-12, atol=1e-14)
    assert again.sign == d.sign
    assert abs(d.causal_norm - d.sign) < 1e-12
    scaled = classify_direction([c * a for a in alpha], eps)
    np.testing.assert_allclose(scaled.alpha, d.alpha, rtol=1e-9, atol=1e-12)


# -- lifting -------------------------------------------------------------------

def test_lift_identity_profile():
    ident = Profile(lambda x: (x, 1.0, 0.0))
    d = classify_direction([1.0, 0, 0], Signature((1, 1, 1)))
    phi, _ = lift_profiles(ProfilePair(ident, ident), d)
    v, g, h = phi([0.7, -2.0, 3.0])
    assert v == 0.7
    np.testing.assert_array_equal(g, [1, 0, 0])
    assert not h.any()


def test_lift_hessian_rank_one(rng):
    pair = ProfilePair(poly_profile([1, 0.3, 0.5]), poly_profile([2, 0.1, 0.2, 0.05]))
    d = random_unit_direction(rng, Signature((1, -1, 1, 1)))
    for field in lift_profiles(pair, d):
        h = field(rng.uniform(-1, 1, 4))[2]
        assert np.linalg.matrix_rank(h, tol=1e-10) <= 1


def test_lift_domain_propagates():
    pair = thm13_profiles(Thm13Params(4))
    d = classify_direction([1.0, 0, 0, 0], Signature((1, 1, 1, 1)))
    phi, _ = lift_profiles(pair, d)
    with pytest.raises(DomainError):
        phi([2.0, 0, 0, 0])


# -- PDE residuals -------------------------------------------------------------

def flat_geom(n=4, m=2, lambda_f=0.0, eps=None):
    eps = eps or Signature((-1,) + (1,) * (n - 1))
    return WarpedGeometry(eps, constant_field(1.0, n), constant_field(1.0, n), m, lambda_f)


def test_pde_flat_product():
    res = pde_residuals(flat_geom(), 0.0, [0.1, 0.2, 0.3, 0.4])
    assert len(res) == 6 + 4 + 1
    assert all(v == 0 for v in res.values())


def test_pde_flat_product_with_lambda():
    g = flat_geom()
    res = pde_residuals(g, 1.0, [0, 0, 0, 0])
    for i, e in enumerate(g.eps.eps):
        assert res[f"eq3[{i}]"] == -e
    assert res["eq4"] == -1.0


def test_pde_domain_error():
    g = WarpedGeometry(Signature((1, 1, 1)), constant_field(1.0, 3), linear_field([1.0, 0, 0]), 1)
    with pytest.raises(DomainError):
        pde_residuals(g, 0.0, [-1.0, 0, 0])


@pytest.mark.parametrize("lam", [0.0, 0.7])
def test_pde_residuals_measure_einstein_defect(rng, lam):
    """eq2 = f phi (Ric - lam g)_ij, eq3 = f phi^2 (Ric - lam g)_ii, eq4 = gamma - lam f^2."""
    from warpedeinstein.warped import warped_ricci

    for _ in range(10):
        n, m = 4, 2
        eps = random_signature(rng, n)
        phi, f = random_smooth_field(rng, n), random_smooth_field(rng, n)
        g = WarpedGeometry(eps, phi, f, m)
        p = rng.uniform(-0.3, 0.3, n)
        ph, fv = phi.value(p), f.value(p)
        res = pde_residuals(g, lam, p)
        ric = flat_fiber_oracle(g, Signature((1, -1), min_dim=1), p)
        gbar = eps.array() / ph**2
        for i in range(n):
            assert res[f"eq3[{i}]"] == pytest.approx(fv * ph**2 * (ric[i, i] - lam * gbar[i]), abs=1e-9)
            for j in range(i + 1, n):
                assert res[f"eq2[{i},{j}]"] == pytest.approx(fv * ph * ric[i, j], abs=1e-9)
        gamma = warped_ricci(g, p).fiber_coefficient
        assert res["eq4"] == pytest.approx(gamma - lam * fv**2, abs=1e-9)


# -- ODE residuals -------------------------------------------------------------

def test_ode_flat():
    assert ode_residuals_nonnull(flat_pair(), 4, 2, 0.0, 0.0, 1, 0.3) == (0, 0, 0)


def test_ode_thm13_at_origin():
    pair = thm13_profiles(Thm13Params(4, 1.0, 1.0, 2.0))
    r = ode_residuals_nonnull(pair, 4, 1, 0.0, 0.0, 1, 0.0)
    assert max(map(abs, r)) < 1e-10


@pytest.mark.parametrize("xi", [-0.5, 0.0, 1.3])
def test_ode_hand_substitution(xi):
    # phi = 1, f = e^xi: R1 = -m f'' = -e^xi, R2 = 0, R3 = -f f'' = -e^(2 xi)
    pair = ProfilePair(constant_profile(1.0), exp_profile(1.0, 1.0))
    r1, r2, r3 = ode_residuals_nonnull(pair, 4, 1, 0.0, 0.0, 1, xi)
    assert r1 == pytest.approx(-math.exp(xi))
    assert r2 == 0
    assert r3 == pytest.approx(-math.exp(2 * xi))


def test_ode_m1_requires_flat_fiber():
    with pytest.raises(ValueError):
        ode_residuals_nonnull(flat_pair(), 4, 1, 0.0, 1.0, 1, 0.0)


def test_ode_bad_sign():
    with pytest.raises(ValueError):
        ode_residuals_nonnull(flat_pair(), 4, 2, 0.0, 0.0, 0, 0.0)


def test_ode_domain():
    pair = thm13_profiles(Thm13Params(4))
    with pytest.raises(DomainError):
        ode_residuals_nonnull(pair, 4, 1, 0.0, 0.0, 1, 1.5)


def test_null_residual():
    assert ode_residual_null(flat_pair(), 4, 2, 0.0).residual == 0
    ex = exp_example_phi(4, 2, 1.0)
    out = ode_residual_null(ex.pair(), 4, 2, 0.4)
    assert abs(out.residual) < 1e-8 and out.admissible
    flagged = ode_residual_null(ex.pair(), 4, 2, 0.4, lam=1.0)
    assert flagged.lambda_flag and not flagged.admissible
    assert ode_residual_null(ex.pair(), 4, 2, 0.4, lambda_f=2.0).lambda_f_flag


# -- chain-rule reduction --------------------------------------------------------

def _check_reduction(rng, pair, eps, m, lam, lambda_f, window, d=None):
    d = d or random_unit_direction(rng, eps)
    phi, f = lift_profiles(pair, d)
    g = WarpedGeometry(eps, phi, f, m, lambda_f)
    worst = 0.0
    for _ in range(20):
        xi = rng.uniform(*window)
        t = rng.uniform(-1, 1, eps.n)
        x = t + (xi - d.alpha @ t) / (d.alpha @ d.alpha) * d.alpha
        pde = pde_residuals(g, lam, x)
        pred = pde_from_ode(pair, d, eps, m, lam, lambda_f, float(d.alpha @ x))
        assert pde.keys() == pred.keys()
        worst = max(worst, max(abs(pde[k] - pred[k]) for k in pde))
    return worst


@pytest.mark.parametrize("m,lam,lambda_f", [(1, 0.0, 0.0), (2, 0.5, -0.3), (3, -1.0, 2.0)])
def test_reduction_on_non_solutions(rng, m, lam, lambda_f):
    pair = ProfilePair(poly_profile([1, 0, 1]), poly_profile([1.5, 0.2, 0.1]))
    for sig in ("+++", "-++", "-+++-"):
        eps = Signature.from_string(sig)
        assert _check_reduction(rng, pair, eps, m, lam, lambda_f, (-1, 1)) < 1e-8


def test_reduction_when_direction_is_a_coordinate_axis(rng):
    # every alpha_i alpha_j (i != j) vanishes; the same combination applies
    pair = ProfilePair(poly_profile([1, 0, 1]), poly_profile([1.5, 0.2, 0.1]))
    eps = Signature((1, -1, 1, 1))
    d = classify_direction([0, 3.0, 0, 0], eps)
    assert d.sign == -1
    assert _check_reduction(rng, pair, eps, 2, 0.3, 0.1, (-1, 1), d) < 1e-8


def test_null_rigidity(rng):
    eps = Signature((-1, 1, 1, 1))
    d = classify_direction([1, 0, 1, 0], eps)
    assert d.is_null
    ex = exp_example_phi(4, 2, 1.0, c1=1.0, c2=0.5)
    phi, f = lift_profiles(ex.pair(), d)
    for lam, lambda_f in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, -1.0)]:
        g = WarpedGeometry(eps, phi, f, 2, lambda_f)
        for _ in range(10):
            x = rng.uniform(-1, 1, 4)
            fv = f.value(x)
            res = pde_residuals(g, lam, x)
            for i in range(4):
                assert res[f"eq3[{i}]"] == pytest.approx(-eps.eps[i] * lam * fv, abs=1e-9)
            assert res["eq4"] == pytest.approx(-(lam * fv**2 - lambda_f), abs=1e-9)
            for k, v in res.items():
                if k.startswith("eq2"):
                    assert abs(v) < 1e-9


# -- Bakry-Emery -----------------------------------------------------------------

def test_bakry_emery_trivial_cases():
    eps = Signature((1, 1, 1))
    flat = flat_metric(eps)
    p = [0.2, 0.4, -0.1]
    assert not bakry_emery_residual(flat, constant_field(3.0, 3), 2, 0.0, p).any()
    out = bakry_emery_residual(flat, linear_field([1.0, 0, 0]), 2, 0.0, p)
    np.testing.assert_array_equal(out, -0.5 * np.diag([1.0, 0, 0]))


def test_bakry_emery_einstein_base():
    hyp = conformal_metric(Signature((1, 1, 1, 1)), linear_field([1.0, 0, 0, 0]))
    out = bakry_emery_residual(hyp, constant_field(1.0, 4), 3, -3.0, [1.5, 0.2, 0.0, -0.3])
    assert np.abs(out).max() < 1e-10


def test_bakry_emery_rejects_m():
    with pytest.raises(ValueError):
        bakry_emery_residual(flat_metric(Signature((1, 1, 1))), constant_field(0.0, 3), 0, 0.0,
                             [0, 0, 0])


# -- reports ---------------------------------------------------------------------

def test_report_aggregates_maximum():
    r = ResidualReport(1e-6)
    r.record("eq2", 1e-9, [0.0])
    r.record("eq2", -3e-7, [1.0])
    r.record("eq3", 0.0)
    assert r.max_for("eq2") == 3e-7
    assert r.per_equation[0].argmax_point == [1.0]
    assert r.passed
    r.record("eq3", 2e-6, [2.0])
    assert not r.passed


def test_report_per_label_tolerance():
    r = ResidualReport(1e-5, tolerances={"mixed": 1e-6})
    r.record("mixed", 5e-6)
    r.record("base", 5e-6)
    assert not r.passed


def test_empty_report_passes():
    assert ResidualReport(1e-6).passed


def test_report_nan_fails():
    r = ResidualReport(1e-6)
    r.record("eq4", 0.0)
    r.record("eq4", float("nan"))
    assert not r.passed


def test_informational_entries_do_not_fail():
    r = ResidualReport(1e-6)
    r.informational.add("info")
    r.record("eq6", 1e-12)
    r.record("info", 5.0)
    assert r.passed
    entries = r.to_dict()["perEquation"]
    assert entries[1]["informational"] is True and "informational" not in entries[0]
