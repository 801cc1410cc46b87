"""Conformally flat base and warped-product metrics with closed-form curvature.

Base ``(R^n, gbar)`` with ``gbar = phi^-2 g``, ``g = diag(eps)``, warped by a
positive ``f`` over an Einstein fiber ``F^m`` with constant ``lambda_f``::

    gtilde = gbar + f^2 g_F

All closed formulas below are written in the base coordinates; only the
sums ``sum_k eps_k (...)`` of derivatives ever appear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffgeo import MetricField, ScalarField, Signature, as_point, ricci_generic
from .errors import DomainError


@dataclass(frozen=True)
class WarpedGeometry:
    """``(R^n, phi^-2 g) x_f F^m`` with fiber Einstein constant ``lambda_f``."""

    eps: Signature
    phi: ScalarField
    f: ScalarField
    m: int
    lambda_f: float = 0.0

    def __post_init__(self):
        if self.eps.n < 3:
            raise ValueError("base dimension must be at least 3")
        if self.m < 1:
            raise ValueError("fiber dimension must be at least 1")
        if self.phi.n != self.eps.n or self.f.n != self.eps.n:
            raise ValueError("phi and f must live on the base R^n")
        if self.m == 1 and self.lambda_f != 0:
            raise ValueError("a one-dimensional fiber is flat: lambda_f must be 0")

    @property
    def n(self) -> int:
        return self.eps.n

    def evaluate(self, p):
        """Return ``(phi, dphi, ddphi, f, df, ddf)`` at ``p`` after domain checks."""
        p = as_point(p, self.n)
        ph, dph, ddph = self.phi(p)
        fv, df, ddf = self.f(p)
        if ph == 0 or not np.isfinite(ph):
            raise DomainError(f"conformal factor vanishes at {p.tolist()}")
        if not fv > 0:
            raise DomainError(f"warping function not positive at {p.tolist()} (f={fv})")
        return ph, dph, ddph, fv, df, ddf


@dataclass
class WarpedRicciComponents:
    base_base: np.ndarray      # Ric(X_i, X_j)
    fiber_coefficient: float   # gamma with Ric(Y_a, Y_b) = gamma g_F(Y_a, Y_b)
    mixed_zero: bool = True    # Ric(X_i, Y_a) vanishes identically


def _conformal_ricci(eps, ph, dph, ddph):
    n = eps.size
    lap = eps @ np.diag(ddph)
    grad2 = eps @ dph**2
    ric = (n - 2) * ddph / ph
    ric[np.diag_indices(n)] += eps * (lap / ph - (n - 1) * grad2 / ph**2)
    return ric


def _conformal_hessian(eps, ph, dph, df, ddf):
    u = dph / ph
    hess = ddf + np.outer(df, u) + np.outer(u, df)
    hess[np.diag_indices(hess.shape[0])] -= eps * (eps @ (u * df))
    return hess


def _check_phi(geom, p):
    p = as_point(p, geom.n)
    triple = geom.phi(p)
    if triple[0] == 0:
        raise DomainError(f"conformal factor vanishes at {p.tolist()}")
    return triple


def conformal_ricci(geom: WarpedGeometry, p) -> np.ndarray:
    """Ricci tensor of ``phi^-2 g`` in closed form."""
    ph, dph, ddph = _check_phi(geom, p)
    return _conformal_ricci(geom.eps.array(), ph, dph, ddph)


def conformal_hessian(geom: WarpedGeometry, p) -> np.ndarray:
    """Hessian of ``f`` with respect to ``phi^-2 g``.

    Off the diagonal ``f_ij + (phi_j f_i + phi_i f_j)/phi``; on it
    ``f_ii + 2 phi_i f_i/phi - eps_i sum_k eps_k phi_k f_k / phi``.
    """
    ph, dph, _ = _check_phi(geom, p)
    _, df, ddf = geom.f(p)
    return _conformal_hessian(geom.eps.array(), ph, dph, df, ddf)


def fiber_coefficient(eps, m, lambda_f, ph, dph, fv, df, ddf) -> float:
    lap_f = eps @ np.diag(ddf)
    cross = eps @ (dph * df)
    if m == 1:
        # Ric(Y, Y) = -gtilde(Y, Y) Lap_gbar f / f
        return float(-fv * ph**2 * lap_f + (len(eps) - 2) * fv * ph * cross)
    n = len(eps)
    return float(lambda_f - fv * ph**2 * lap_f + (n - 2) * fv * ph * cross
                 - (m - 1) * ph**2 * (eps @ df**2))


def warped_ricci(geom: WarpedGeometry, p) -> WarpedRicciComponents:
    """Block components of the warped-product Ricci tensor."""
    ph, dph, ddph, fv, df, ddf = geom.evaluate(p)
    eps = geom.eps.array()
    base = _conformal_ricci(eps, ph, dph, ddph) - geom.m / fv * _conformal_hessian(eps, ph, dph, df, ddf)
    gamma = fiber_coefficient(eps, geom.m, geom.lambda_f, ph, dph, fv, df, ddf)
    return WarpedRicciComponents(0.5 * (base + base.T), gamma)


def warped_metric(geom: WarpedGeometry, fiber_eps: Signature) -> MetricField:
    """Full ``(n+m)``-dimensional metric ``diag(eps/phi^2, f^2 fiber_eps)``.

    Nothing depends on the fiber coordinates, so only the base block of the
    derivative arrays is populated.
    """
    if fiber_eps.n != geom.m:
        raise ValueError(f"fiber signature has {fiber_eps.n} entries, fiber dimension is {geom.m}")
    n, m = geom.n, geom.m
    d = n + m
    eps = geom.eps.array()
    eta = fiber_eps.array()
    base, fib = np.arange(n), np.arange(n, d)

    def split(q):
        return geom.evaluate(as_point(q, d)[:n])

    def g(q):
        ph, _, _, fv, _, _ = split(q)
        return np.diag(np.concatenate([eps / ph**2, fv**2 * eta]))

    def dg(q):
        ph, dph, _, fv, df, _ = split(q)
        out = np.zeros((d, d, d))
        out[:n, base, base] = np.outer(-2 * dph / ph**3, eps)
        out[:n, fib, fib] = np.outer(2 * fv * df, eta)
        return out

    def d2g(q):
        ph, dph, ddph, fv, df, ddf = split(q)
        out = np.zeros((d, d, d, d))
        cb = 6 * np.outer(dph, dph) / ph**4 - 2 * ddph / ph**3
        cf = 2 * np.outer(df, df) + 2 * fv * ddf
        out[:n, :n, base, base] = cb[:, :, None] * eps
        out[:n, :n, fib, fib] = cf[:, :, None] * eta
        return out

    return MetricField(d, g, dg, d2g)


def flat_fiber_oracle(geom: WarpedGeometry, fiber_eps: Signature, p, q=None) -> np.ndarray:
    """Full Ricci matrix of the warped product over a flat fiber, by brute force.

    Block layout matches :func:`warped_ricci`: the base block is
    ``base_base``, the mixed block vanishes, the fiber block is
    ``fiber_coefficient * diag(fiber_eps)``.
    """
    if geom.lambda_f != 0:
        raise ValueError("a flat fiber realizes lambda_f = 0 only")
    p = as_point(p, geom.n)
    q = np.zeros(geom.m) if q is None else as_point(q, geom.m)
    return ricci_generic(warped_metric(geom, fiber_eps), np.concatenate([p, q])).ricci
