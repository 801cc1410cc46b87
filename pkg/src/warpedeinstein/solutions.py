"""Explicit Ricci-flat profile families and the null-direction integrator.

* :func:`thm13_profiles` -- one-dimensional fiber, power-law family on a
  half-line.
* :func:`thm14_profiles` -- fiber dimension ``m >= 2``, two power-law
  branches on opposite half-lines.
* :func:`thm15_integrate` -- for a null direction any positive ``f`` works;
  ``phi`` solves a linear second-order ODE, integrated here with RK4.
* :func:`exp_example_phi` -- closed-form ``phi`` for ``f = k exp(A xi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .config import DEFAULT
from .einstein import Profile, ProfilePair, exp_profile
from .errors import BlowUpError, DomainError

MINUS, PLUS = "minus", "plus"


@dataclass(frozen=True)
class Thm13Params:
    n: int = 4
    k: float = 1.0
    k1: float = 1.0
    k2: float = 2.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not (self.k > 0 and self.k1 > 0):
            raise ValueError("k and k1 must be positive")


@dataclass(frozen=True)
class Thm14Params:
    n: int = 4
    m: int = 2
    branch: str = MINUS
    k: float = 1.0
    k1: float = 1.0
    k2: float = 2.0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.m < 2:
            raise ValueError("this family needs a fiber of dimension m >= 2")
        if self.branch not in (MINUS, PLUS):
            raise ValueError(f"branch must be {MINUS!r} or {PLUS!r}")
        if not (self.k > 0 and self.k1 > 0):
            raise ValueError("k and k1 must be positive")

    @property
    def beta(self) -> float:
        n, m = self.n, self.m
        return math.sqrt(m * (n - 1) * (m + n - 2)) / (n - 1)

    @property
    def sign(self) -> int:
        return -1 if self.branch == MINUS else 1

    @property
    def alpha_exp(self) -> float:
        """Exponent in ``phi = k f^alpha``.

        The minus branch carries ``(m + beta)/(n - 2)``: integrating
        ``f''/f' = (1 + (n-2) alpha - m) f'/f`` gives
        ``f = [-beta (k1 xi + k2)]^(-1/beta)`` exactly when
        ``(n-2) alpha - (m-1) = 1 + beta``.
        """
        return (self.m - self.sign * self.beta) / (self.n - 2)


def domain_of(params) -> Tuple[float, float]:
    """Open half-line in ``xi`` on which the family is defined."""
    if isinstance(params, Thm13Params):
        return (-math.inf, params.k2 / ((params.n - 2) * params.k1))
    if isinstance(params, Thm14Params):
        edge = -params.k2 / params.k1
        return (-math.inf, edge) if params.branch == MINUS else (edge, math.inf)
    raise TypeError(f"no domain rule for {type(params).__name__}")


def _power_profile(coef: float, slope: float, offset: float, power: float,
                   domain, name: str) -> Profile:
    """``coef * (slope*xi + offset)^power`` with its first two derivatives."""
    def fn(xi):
        base = slope * xi + offset
        if not base > 0:
            raise DomainError(f"xi={xi!r} outside {name} domain")
        v = coef * base**power
        d1 = power * slope * v / base
        d2 = power * (power - 1) * slope**2 * v / base**2
        return v, d1, d2
    return Profile(fn, domain, name=name)


def thm13_profiles(params: Thm13Params) -> ProfilePair:
    """``phi = [2/D]^(2/(n-2))``, ``f = 2k/D`` with ``D = -(n-2) k1 xi + k2``."""
    n, k, k1, k2 = params.n, params.k, params.k1, params.k2
    dom = domain_of(params)
    slope = -(n - 2) * k1
    # 2/D = (D/2)^-1
    phi = _power_profile(1.0, slope / 2, k2 / 2, -2.0 / (n - 2), dom, "thm13 phi")
    f = _power_profile(2 * k, slope, k2, -1.0, dom, "thm13 f")
    return ProfilePair(phi, f, dom)


def thm14_profiles(params: Thm14Params) -> ProfilePair:
    """``f = [s beta (k1 xi + k2)]^(s/beta)``, ``phi = k f^alpha`` with ``s = -1`` (minus) or ``+1``."""
    s, beta = params.sign, params.beta
    dom = domain_of(params)
    slope, offset = s * beta * params.k1, s * beta * params.k2
    f = _power_profile(1.0, slope, offset, s / beta, dom, f"thm14 f_{params.branch}")
    phi = _power_profile(params.k, slope, offset, s * params.alpha_exp / beta, dom,
                         f"thm14 phi_{params.branch}")
    return ProfilePair(phi, f, dom)


# --------------------------------------------------------------------------
# exponential example for null directions
# --------------------------------------------------------------------------

def characteristic_roots(n: int, m: int, a: float) -> Tuple[float, float]:
    """Roots of ``(n-2) r^2 - 2 m A r - m A^2 = 0``, larger first."""
    disc = math.sqrt(m * (m + n - 2))
    return a * (m + disc) / (n - 2), a * (m - disc) / (n - 2)


def alternative_roots(n: int, m: int, a: float) -> Tuple[float, float]:
    """Exponents ``A (m +- sqrt(m (n-1))) / (n-2)``, kept for comparison.

    They coincide with :func:`characteristic_roots` only for ``m = 1``.
    """
    disc = math.sqrt(m * (n - 1))
    return a * (m + disc) / (n - 2), a * (m - disc) / (n - 2)


def _two_exp(c1, r1, c2, r2, name):
    def fn(xi):
        e1, e2 = c1 * math.exp(r1 * xi), c2 * math.exp(r2 * xi)
        return e1 + e2, r1 * e1 + r2 * e2, r1 * r1 * e1 + r2 * r2 * e2
    return Profile(fn, name=name)


@dataclass(frozen=True)
class ExpExample:
    """``phi = c1 e^(r+ xi) + c2 e^(r- xi)`` paired with ``f = k e^(A xi)``."""

    n: int
    m: int
    A: float
    c1: float = 1.0
    c2: float = 1.0
    k: float = 1.0

    @property
    def roots(self) -> Tuple[float, float]:
        return characteristic_roots(self.n, self.m, self.A)

    @property
    def alternative_roots(self) -> Tuple[float, float]:
        return alternative_roots(self.n, self.m, self.A)

    @property
    def valid(self) -> bool:
        """``phi`` is not identically zero."""
        return not (self.c1 == 0 and self.c2 == 0)

    @property
    def phi(self) -> Profile:
        r1, r2 = self.roots
        return _two_exp(self.c1, r1, self.c2, r2, "exp-example phi")

    @property
    def alternative_phi(self) -> Profile:
        r1, r2 = self.alternative_roots
        return _two_exp(self.c1, r1, self.c2, r2, "exp-example phi (alternative exponents)")

    @property
    def f(self) -> Profile:
        return exp_profile(self.k, self.A)

    def pair(self, alternative: bool = False) -> ProfilePair:
        if not self.valid:
            raise DomainError("phi is identically zero and cannot be a conformal factor")
        return ProfilePair(self.alternative_phi if alternative else self.phi, self.f)


def exp_example_phi(n: int, m: int, A: float, c1: float = 1.0, c2: float = 1.0,
                    k: float = 1.0) -> ExpExample:
    if A == 0:
        raise ValueError("A must be nonzero")
    if n < 3 or m < 1:
        raise ValueError("need n >= 3 and m >= 1")
    return ExpExample(n, m, float(A), float(c1), float(c2), float(k))


# --------------------------------------------------------------------------
# null-direction integrator
# --------------------------------------------------------------------------

def _rhs(f: Profile, n: int, m: int, xi: float, y: np.ndarray) -> np.ndarray:
    fv, f1, f2 = f(xi)
    if not fv > 0:
        raise DomainError(f"warping function not positive at xi={xi!r} (f={fv})")
    return np.array([y[1], m * (y[0] * f2 + 2 * y[1] * f1) / ((n - 2) * fv)])


def _rk4_run(f, n, m, xi0, y0, h, steps):
    xs = np.empty(steps + 1)
    ys = np.empty((steps + 1, 2))
    xs[0], ys[0] = xi0, y0
    y = np.array(y0, dtype=float)
    x = xi0
    for i in range(steps):
        k1 = _rhs(f, n, m, x, y)
        k2 = _rhs(f, n, m, x + h / 2, y + h / 2 * k1)
        k3 = _rhs(f, n, m, x + h / 2, y + h / 2 * k2)
        k4 = _rhs(f, n, m, x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x = xi0 + (i + 1) * h
        if not np.all(np.isfinite(y)):
            raise BlowUpError(f"phi blew up near xi={x!r}", last_xi=float(xs[i]))
        xs[i + 1], ys[i + 1] = x, y
    return xs, ys


@dataclass
class NullProfile:
    """Grid solution of the null-direction ODE for ``phi`` given ``f``."""

    f: Profile
    n: int
    m: int
    xi0: float
    phi0: float
    dphi0: float
    step: float
    xi: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray

    def _f_table(self):
        return np.array([self.f(x) for x in self.xi]).T

    def residuals(self) -> np.ndarray:
        """Null ODE residual at every node, using the stored second derivative."""
        fv, f1, f2 = self._f_table()
        return ((self.n - 2) * fv * self.ddphi - self.m * self.phi * f2
                - 2 * self.m * self.dphi * f1)

    def stencil_residuals(self) -> np.ndarray:
        """Same residual with ``phi''`` from a five-point stencil on ``phi'``.

        Independent of the stored second derivative; two nodes are lost at
        each end.
        """
        d = self.dphi
        h = np.diff(self.xi).mean()
        dd = (-d[4:] + 8 * d[3:-1] - 8 * d[1:-3] + d[:-4]) / (12 * h)
        fv, f1, f2 = self._f_table()[:, 2:-2]
        return ((self.n - 2) * fv * dd - self.m * self.phi[2:-2] * f2
                - 2 * self.m * self.dphi[2:-2] * f1)

    @property
    def domain(self) -> Tuple[float, float]:
        return float(self.xi[0]), float(self.xi[-1])

    def profile(self) -> Profile:
        """Continuous ``phi`` by cubic Hermite interpolation of the nodes.

        ``phi''`` is taken from the ODE itself at the interpolated state.
        """
        spline = CubicHermiteSpline(self.xi, self.phi, self.dphi)
        dspline = spline.derivative()
        lo, hi = self.domain

        def fn(x):
            y = np.array([float(spline(x)), float(dspline(x))])
            return y[0], y[1], _rhs(self.f, self.n, self.m, x, y)[1]

        # closed grid ends are usable; widen the open interval by a hair
        pad = 1e-12 * max(1.0, hi - lo)
        return Profile(fn, (lo - pad, hi + pad), name="integrated phi")

    def pair(self) -> ProfilePair:
        prof = self.profile()
        return ProfilePair(prof, self.f, prof.domain)


def thm15_integrate(f: Profile, n: int, m: int, xi0: float = 0.0, phi0: float = 1.0,
                    dphi0: float = 0.0, step: float = DEFAULT.ode_step,
                    span: Optional[Tuple[float, float]] = None) -> NullProfile:
    """Integrate ``(n-2) f phi'' - m phi f'' - 2 m phi' f' = 0`` with classical RK4.

    ``span`` defaults to ``[xi0, xi0 + 1]``; nodes are equally spaced with a
    step no larger than ``step`` on each side of ``xi0``.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if n < 3 or m < 1:
        raise ValueError("need n >= 3 and m >= 1")
    lo, hi = span if span is not None else (xi0, xi0 + 1.0)
    if not lo <= xi0 <= hi:
        raise ValueError(f"xi0={xi0} outside span [{lo}, {hi}]")

    y0 = np.array([phi0, dphi0], dtype=float)
    parts_x, parts_y = [], []
    if xi0 > lo:
        steps = math.ceil((xi0 - lo) / step - 1e-9)
        xs, ys = _rk4_run(f, n, m, xi0, y0, -(xi0 - lo) / steps, steps)
        parts_x.append(xs[:0:-1])
        parts_y.append(ys[:0:-1])
    parts_x.append(np.array([xi0]))
    parts_y.append(y0[None, :])
    if hi > xi0:
        steps = math.ceil((hi - xi0) / step - 1e-9)
        xs, ys = _rk4_run(f, n, m, xi0, y0, (hi - xi0) / steps, steps)
        parts_x.append(xs[1:])
        parts_y.append(ys[1:])

    xi = np.concatenate(parts_x)
    y = np.concatenate(parts_y)
    ddphi = np.array([_rhs(f, n, m, x, yy)[1] for x, yy in zip(xi, y)])
    return NullProfile(f, n, m, float(xi0), float(phi0), float(dphi0), float(step),
                       xi, y[:, 0].copy(), y[:, 1].copy(), ddphi)
