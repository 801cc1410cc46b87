import math

import numpy as np
import pytest

from warpedeinstein import (BlowUpError, DomainError, ProfilePair, Thm13Params, Thm14Params,
                            domain_of, exp_example_phi, ode_residual_null, ode_residuals_nonnull,
                            thm13_profiles, thm14_profiles, thm15_integrate)
from warpedeinstein.einstein import Profile, constant_profile, exp_profile
from warpedeinstein.solutions import MINUS, PLUS, characteristic_roots


# -- one-dimensional fiber family ---------------------------------------------

def test_thm13_origin_values():
    phi, f = thm13_profiles(Thm13Params(4, 1.0, 1.0, 2.0))(0.0)
    assert phi[0] == pytest.approx(1.0)
    assert f[0] == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_thm13_relation_and_residuals(n):
    params = Thm13Params(n, k=1.3, k1=0.7, k2=2.0)
    pair = thm13_profiles(params)
    hi = domain_of(params)[1]
    for xi in np.linspace(hi - 5, hi - 0.05, 25):
        (ph, _, _), (fv, _, _) = pair(xi)
        assert fv == pytest.approx(params.k * ph ** ((n - 2) / 2), rel=1e-12)
        for eps in (1, -1):
            r = ode_residuals_nonnull(pair, n, 1, 0.0, 0.0, eps, xi)
            assert max(abs(v) for v in r) < 1e-8 * max(1.0, fv * ph**2) ** 2


def test_thm13_domain():
    assert domain_of(Thm13Params(4, 1.0, 1.0, 2.0)) == (-math.inf, 1.0)
    pair = thm13_profiles(Thm13Params(4))
    with pytest.raises(DomainError):
        pair(1.0)


def test_thm13_blows_up_at_boundary():
    pair = thm13_profiles(Thm13Params(4))
    vals = [pair(1.0 - d)[1][0] for d in (1e-1, 1e-3, 1e-6)]
    assert vals[0] < vals[1] < vals[2] and vals[2] > 1e5


# -- higher-dimensional fiber family -------------------------------------------

def test_thm14_constants():
    p = Thm14Params(4, 2, MINUS)
    assert p.beta == pytest.approx(math.sqrt(24) / 3, abs=1e-12)
    assert p.alpha_exp == pytest.approx((2 + math.sqrt(24) / 3) / 2, abs=1e-12)
    assert p.alpha_exp == pytest.approx(1.816497, abs=1e-6)
    assert Thm14Params(4, 2, PLUS).alpha_exp == pytest.approx(0.183503, abs=1e-6)


def test_thm14_alpha_matches_quadratic_form():
    # (m(n-1) +- sqrt(m(n-1)(m+n-2))) / ((n-1)(n-2)) is the same number
    for n, m in [(3, 2), (4, 2), (5, 3), (7, 4)]:
        q = math.sqrt(m * (n - 1) * (m + n - 2))
        plus = (m * (n - 1) - q) / ((n - 1) * (n - 2))
        minus = (m * (n - 1) + q) / ((n - 1) * (n - 2))
        assert Thm14Params(n, m, PLUS).alpha_exp == pytest.approx(plus, abs=1e-14)
        assert Thm14Params(n, m, MINUS).alpha_exp == pytest.approx(minus, abs=1e-14)


def test_thm14_domains():
    assert domain_of(Thm14Params(4, 2, MINUS)) == (-math.inf, -2.0)
    assert domain_of(Thm14Params(4, 2, PLUS)) == (-2.0, math.inf)
    with pytest.raises(DomainError):
        thm14_profiles(Thm14Params(4, 2, PLUS))(-2.5)


def test_thm14_needs_fiber_dimension_two():
    with pytest.raises(ValueError):
        Thm14Params(4, 1)


@pytest.mark.parametrize("n,m", [(4, 2), (5, 3)])
@pytest.mark.parametrize("branch", [MINUS, PLUS])
def test_thm14_relation_and_residuals(n, m, branch):
    params = Thm14Params(n, m, branch, k=1.5)
    pair = thm14_profiles(params)
    edge = -params.k2 / params.k1
    side = -1 if branch == MINUS else 1
    for d in np.linspace(0.05, 5, 25):
        xi = edge + side * d
        (ph, _, _), (fv, _, _) = pair(xi)
        assert ph == pytest.approx(params.k * fv**params.alpha_exp, rel=1e-12)
        for eps in (1, -1):
            r = ode_residuals_nonnull(pair, n, m, 0.0, 0.0, eps, xi)
            assert max(abs(v) for v in r) < 1e-8


def test_thm14_swapped_exponent_fails():
    # pairing the minus f with the plus exponent is not a solution
    good = Thm14Params(4, 2, MINUS)
    wrong = (2 - good.beta) / 2
    f = thm14_profiles(good).f
    phi = Profile(lambda x: (lambda v, d1, d2: (v**wrong, wrong * v**(wrong - 1) * d1,
                                                 wrong * (wrong - 1) * v**(wrong - 2) * d1**2
                                                 + wrong * v**(wrong - 1) * d2))(*f(x)),
                  f.domain)
    r = ode_residuals_nonnull(ProfilePair(phi, f), 4, 2, 0.0, 0.0, 1, -3.0)
    assert max(abs(v) for v in r) > 1e-3


def test_thm14_blows_up_at_boundary():
    pair = thm14_profiles(Thm14Params(4, 2, PLUS))
    # f -> 0 with a non-integrable curvature: f'' is unbounded at the edge
    assert pair(-2 + 1e-2)[1][0] > pair(-2 + 1e-8)[1][0] > 0
    assert abs(pair(-2 + 1e-8)[1][2]) > 1e6


# -- null directions -------------------------------------------------------------

def test_thm15_constant_f_gives_linear_phi():
    sol = thm15_integrate(constant_profile(2.0), 4, 2, phi0=1.0, dphi0=0.5)
    np.testing.assert_allclose(sol.phi, 1.0 + 0.5 * sol.xi, atol=1e-12)
    assert np.abs(sol.ddphi).max() < 1e-14


def test_thm15_pure_mode():
    r = 1 + math.sqrt(2)
    sol = thm15_integrate(exp_profile(1.0, 1.0), 3, 1, phi0=1.0, dphi0=r, step=1e-3)
    assert sol.xi[0] == 0 and sol.xi[-1] == pytest.approx(1.0)
    assert np.abs(sol.phi - np.exp(r * sol.xi)).max() < 1e-6


def test_thm15_matches_characteristic_roots():
    ex = exp_example_phi(4, 2, 1.0, c1=1.0, c2=1.0)
    r1, r2 = ex.roots
    sol = thm15_integrate(ex.f, 4, 2, phi0=2.0, dphi0=r1 + r2, step=1e-3)
    exact = np.array([ex.phi(x)[0] for x in sol.xi])
    assert np.abs(sol.phi - exact).max() < 1e-6


def test_thm15_linear_in_initial_data():
    f = exp_profile(0.5, 0.8)
    a = thm15_integrate(f, 5, 3, phi0=1.0, dphi0=0.0)
    b = thm15_integrate(f, 5, 3, phi0=0.0, dphi0=1.0)
    c = thm15_integrate(f, 5, 3, phi0=2.0, dphi0=-3.0)
    np.testing.assert_allclose(c.phi, 2 * a.phi - 3 * b.phi, atol=1e-12)


def test_thm15_two_sided_span_and_stencil():
    f = Profile(lambda x: (2 + math.sin(x), math.cos(x), -math.sin(x)))
    sol = thm15_integrate(f, 4, 2, xi0=0.3, phi0=1.0, dphi0=0.2, span=(-1.0, 1.0))
    assert sol.xi[0] == pytest.approx(-1.0) and sol.xi[-1] == pytest.approx(1.0)
    assert np.all(np.diff(sol.xi) > 0)
    assert np.abs(sol.residuals()).max() < 1e-12
    assert np.abs(sol.stencil_residuals()).max() < 1e-6
    prof = sol.profile()
    i = len(sol.xi) // 3
    assert prof(sol.xi[i])[0] == pytest.approx(sol.phi[i], abs=1e-12)
    assert abs(ode_residual_null(sol.pair(), 4, 2, 0.123).residual) < 1e-10


def test_thm15_rejects_bad_input():
    with pytest.raises(ValueError):
        thm15_integrate(constant_profile(1.0), 4, 2, step=0.0)
    with pytest.raises(ValueError):
        thm15_integrate(constant_profile(1.0), 4, 2, xi0=5.0, span=(0.0, 1.0))
    with pytest.raises(DomainError):
        thm15_integrate(Profile(lambda x: (0.5 - x, -1.0, 0.0)), 4, 2)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_thm15_blow_up():
    # a huge fiber dimension makes the step wildly unstable; phi overflows
    with pytest.raises(BlowUpError) as info:
        thm15_integrate(exp_profile(1.0, 1.0), 3, 10**6, phi0=1.0, dphi0=0.0)
    assert 0.0 <= info.value.last_xi < 1.0


# -- exponential example ---------------------------------------------------------

@pytest.mark.parametrize("n,m,A", [(3, 1, 1.0), (4, 2, 1.0), (5, 3, -0.7)])
def test_exp_roots_solve_quadratic(n, m, A):
    for r in characteristic_roots(n, m, A):
        assert (n - 2) * r * r - 2 * m * A * r - m * A * A == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("n,m", [(3, 1), (4, 2), (6, 4)])
def test_exp_example_is_null_solution(n, m):
    ex = exp_example_phi(n, m, 1.0, c1=0.4, c2=2.0)
    for xi in np.linspace(-1, 1, 11):
        assert abs(ode_residual_null(ex.pair(), n, m, xi).residual) < 1e-10
        assert ex.phi(xi)[0] > 0


def test_exp_alternative_exponents():
    ex = exp_example_phi(3, 1, 1.0)
    assert ex.alternative_roots == pytest.approx(ex.roots)
    ex = exp_example_phi(4, 2, 1.0)
    assert abs(ode_residual_null(ex.pair(alternative=True), 4, 2, 0.0).residual) > 0.1


def test_exp_example_degenerate():
    ex = exp_example_phi(4, 2, 1.0, c1=0.0, c2=0.0)
    assert not ex.valid
    with pytest.raises(DomainError):
        ex.pair()
    with pytest.raises(ValueError):
        exp_example_phi(4, 2, 0.0)
