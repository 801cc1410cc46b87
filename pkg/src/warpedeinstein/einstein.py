"""Einstein conditions for the warped product, written as residuals.

Three levels are provided:

* the PDE system on R^n (:func:`pde_residuals`), whose vanishing at a
  point is equivalent to ``Ric(gtilde) = lam * gtilde`` there;
* its reduction to ODEs in ``xi = alpha . x`` for translation-invariant
  profiles (:func:`ode_residuals_nonnull`, :func:`ode_residual_null`);
* the Bakry-Emery form on a general base metric.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .config import DEFAULT
from .diffgeo import MetricField, ScalarField, Signature, as_point, ricci_generic
from .errors import DomainError
from .warped import WarpedGeometry


# --------------------------------------------------------------------------
# directions
# --------------------------------------------------------------------------

class CausalClass(enum.Enum):
    NULL = "null"
    UNIT = "unit"


@dataclass(frozen=True)
class Direction:
    alpha: np.ndarray
    causal_norm: float
    kind: CausalClass
    sign: int = 0          # eps_{i0} for UNIT directions, 0 for NULL

    @property
    def is_null(self) -> bool:
        return self.kind is CausalClass.NULL


def _exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def classify_direction(alpha: Sequence, eps: Signature,
                       null_tolerance: float = DEFAULT.null) -> Direction:
    """Classify ``alpha`` as null or rescale it to causal norm +-1.

    Integer or :class:`~fractions.Fraction` entries are classified exactly,
    so a rational null vector is never mistaken for a tiny timelike one.
    """
    if len(alpha) != eps.n:
        raise ValueError(f"direction has {len(alpha)} entries, signature has {eps.n}")
    if _exact(alpha):
        norm_exact = sum(Fraction(e) * Fraction(a) ** 2 for e, a in zip(eps.eps, alpha))
        if all(a == 0 for a in alpha):
            raise DomainError("direction must be nonzero")
        vec = np.array([float(a) for a in alpha])
        if norm_exact == 0:
            return Direction(vec, 0.0, CausalClass.NULL)
        norm = float(norm_exact)
    else:
        vec = np.asarray(alpha, dtype=float)
        if not np.any(vec):
            raise DomainError("direction must be nonzero")
        norm = float(eps.array() @ vec**2)
        if abs(norm) < null_tolerance:
            return Direction(vec, norm, CausalClass.NULL)
    unit = vec / math.sqrt(abs(norm))
    sign = 1 if norm > 0 else -1
    return Direction(unit, float(eps.array() @ unit**2), CausalClass.UNIT, sign)


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------

class Profile:
    """A function of one variable returning ``(value, first, second)`` derivatives."""

    def __init__(self, fn: Callable[[float], Tuple[float, float, float]],
                 domain: Tuple[float, float] = (-math.inf, math.inf), name: str = ""):
        self._fn = fn
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name

    def contains(self, xi: float) -> bool:
        lo, hi = self.domain
        return lo < xi < hi

    def __call__(self, xi: float) -> Tuple[float, float, float]:
        if not self.contains(xi):
            raise DomainError(f"xi={xi!r} outside {self.name or 'profile'} domain {self.domain}")
        v, d1, d2 = self._fn(float(xi))
        return float(v), float(d1), float(d2)

    def __repr__(self):
        return f"Profile({self.name!r}, domain={self.domain})"


def constant_profile(c: float) -> Profile:
    return Profile(lambda xi: (c, 0.0, 0.0), name=f"const {c:g}")


def exp_profile(k: float, a: float) -> Profile:
    """``k exp(a xi)``."""
    def fn(xi):
        v = k * math.exp(a * xi)
        return v, a * v, a * a * v
    return Profile(fn, name=f"{k:g}*exp({a:g} xi)")


@dataclass
class ProfilePair:
    phi: Profile
    f: Profile
    domain: Tuple[float, float] = (-math.inf, math.inf)

    def contains(self, xi: float) -> bool:
        return self.domain[0] < xi < self.domain[1]

    def __call__(self, xi: float):
        if not self.contains(xi):
            raise DomainError(f"xi={xi!r} outside domain {self.domain}")
        ph = self.phi(xi)
        fv = self.f(xi)
        if ph[0] == 0:
            raise DomainError(f"phi vanishes at xi={xi!r}")
        if not fv[0] > 0:
            raise DomainError(f"f not positive at xi={xi!r}")
        return ph, fv


def lift_profiles(profiles: ProfilePair, direction: Direction) -> Tuple[ScalarField, ScalarField]:
    """Pull both profiles back to R^n along ``xi = alpha . x``."""
    alpha = np.asarray(direction.alpha, dtype=float)
    outer = np.outer(alpha, alpha)
    n = alpha.size

    def lift(profile):
        def triple(p):
            v, d1, d2 = profile(float(alpha @ p))
            return v, d1 * alpha, d2 * outer
        return ScalarField(triple, n, name=f"lift of {profile.name}")

    return lift(profiles.phi), lift(profiles.f)


# --------------------------------------------------------------------------
# residuals
# --------------------------------------------------------------------------

def _pde_from_triples(eps, m, lam, lambda_f, ph, dph, ddph, fv, df, ddf) -> Dict[str, float]:
    n = eps.size
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            out[f"eq2[{i},{j}]"] = ((n - 2) * fv * ddph[i, j] - m * ph * ddf[i, j]
                                    - m * dph[i] * df[j] - m * dph[j] * df[i])
    lap_phi = eps @ np.diag(ddph)
    grad_phi2 = eps @ dph**2
    cross = eps @ (dph * df)
    bracket = fv * ph * lap_phi - (n - 1) * fv * grad_phi2 + m * ph * cross
    for i in range(n):
        lhs = (ph * ((n - 2) * fv * ddph[i, i] - m * ph * ddf[i, i] - 2 * m * dph[i] * df[i])
               + eps[i] * bracket)
        out[f"eq3[{i}]"] = lhs - eps[i] * lam * fv
    lhs4 = (-fv * ph**2 * (eps @ np.diag(ddf)) + (n - 2) * fv * ph * cross)
    if m > 1:
        lhs4 -= (m - 1) * ph**2 * (eps @ df**2)
    out["eq4"] = lhs4 - (lam * fv**2 - lambda_f)
    return {k: float(v) for k, v in out.items()}


def pde_residuals(geom: WarpedGeometry, lam: float, p) -> Dict[str, float]:
    """Residuals of the three PDE families at ``p``, keyed by equation and index.

    Keys are ``eq2[i,j]`` (``i < j``), ``eq3[i]`` and ``eq4``. All vanish iff
    the warped product is Einstein with constant ``lam`` at ``p``.
    """
    ph, dph, ddph, fv, df, ddf = geom.evaluate(p)
    return _pde_from_triples(geom.eps.array(), geom.m, lam, geom.lambda_f,
                             ph, dph, ddph, fv, df, ddf)


def nonnull_residuals_at(n: int, m: int, lam: float, lambda_f: float, eps_i0: int,
                         phi: Sequence[float], f: Sequence[float]) -> Tuple[float, float, float]:
    """ODE residuals from the derivative triples ``(phi, phi', phi'')`` and ``(f, f', f'')``."""
    ph, ph1, ph2 = phi
    fv, f1, f2 = f
    r1 = (n - 2) * fv * ph2 - m * ph * f2 - 2 * m * ph1 * f1
    r2 = eps_i0 * (fv * ph * ph2 - (n - 1) * fv * ph1**2 + m * ph * ph1 * f1) - lam * fv
    if m == 1:
        r3 = eps_i0 * (-fv * ph**2 * f2 + (n - 2) * fv * ph * ph1 * f1) - lam * fv**2
    else:
        r3 = (eps_i0 * (-fv * ph**2 * f2 + (n - 2) * fv * ph * ph1 * f1 - (m - 1) * ph**2 * f1**2)
              - (lam * fv**2 - lambda_f))
    return float(r1), float(r2), float(r3)


def null_residual_at(n: int, m: int, phi: Sequence[float], f: Sequence[float]) -> float:
    ph, ph1, ph2 = phi
    fv, f1, f2 = f
    return float((n - 2) * fv * ph2 - m * ph * f2 - 2 * m * ph1 * f1)


def ode_residuals_nonnull(profiles: ProfilePair, n: int, m: int, lam: float, lambda_f: float,
                          eps_i0: int, xi: float) -> Tuple[float, float, float]:
    """The three ODE residuals for a direction of causal norm ``eps_i0 = +-1``.

    For ``m = 1`` the third equation drops the ``(m-1)`` term and
    ``lambda_f`` must be zero.
    """
    if eps_i0 not in (1, -1):
        raise ValueError("eps_i0 must be +1 or -1")
    if m == 1 and lambda_f != 0:
        raise ValueError("a one-dimensional fiber is flat: lambda_f must be 0")
    ph, fv = profiles(xi)
    return nonnull_residuals_at(n, m, lam, lambda_f, eps_i0, ph, fv)


@dataclass
class NullResidual:
    residual: float
    lambda_flag: bool = False     # nonzero lambda supplied for a null direction
    lambda_f_flag: bool = False   # nonzero lambda_f supplied for a null direction

    @property
    def admissible(self) -> bool:
        return not (self.lambda_flag or self.lambda_f_flag)


def ode_residual_null(profiles: ProfilePair, n: int, m: int, xi: float,
                      lam: float = 0.0, lambda_f: float = 0.0) -> NullResidual:
    """Residual of the single linear ODE left for a null direction.

    A null direction only admits ``lam = lambda_f = 0``; other values are
    flagged rather than folded into the residual.
    """
    ph, fv = profiles(xi)
    return NullResidual(null_residual_at(n, m, ph, fv), lam != 0, lambda_f != 0)


def pde_from_ode(profiles: ProfilePair, direction: Direction, eps: Signature, m: int,
                 lam: float, lambda_f: float, xi: float) -> Dict[str, float]:
    """PDE residuals predicted from the ODE residuals by the chain rule.

    ``eq2[i,j] = a_i a_j R1``, ``eq3[i] = a_i^2 phi R1 + eps_i R2`` and
    ``eq4 = R3``. For a null direction ``R2 = -lam f`` and
    ``R3 = -(lam f^2 - lambda_f)``.
    """
    alpha = direction.alpha
    n = alpha.size
    (ph, ph1, ph2), (fv, f1, f2) = profiles(xi)
    if direction.is_null:
        r1 = ode_residual_null(profiles, n, m, xi).residual
        r2 = -lam * fv
        r3 = -(lam * fv**2 - lambda_f)
    else:
        r1, r2, r3 = ode_residuals_nonnull(profiles, n, m, lam, lambda_f, direction.sign, xi)
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            out[f"eq2[{i},{j}]"] = alpha[i] * alpha[j] * r1
    for i in range(n):
        out[f"eq3[{i}]"] = alpha[i] ** 2 * ph * r1 + eps.eps[i] * r2
    out["eq4"] = r3
    return {k: float(v) for k, v in out.items()}


def bakry_emery_residual(base_metric: MetricField, f_warp: ScalarField, m: int, lam: float,
                         p) -> np.ndarray:
    """``Ric + Hess f - df (x) df / m - lam g`` on ``base_metric``.

    ``f_warp`` enters literally, with no logarithmic change of variable.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    p = as_point(p, base_metric.dim)
    curv = ricci_generic(base_metric, p)
    _, grad, hess = f_warp(p)
    cov_hess = hess - np.einsum("kij,k->ij", curv.christoffel, grad)
    return curv.ricci + cov_hess - np.outer(grad, grad) / m - lam * base_metric.metric(p)


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

@dataclass
class EquationResult:
    label: str
    max_residual: float
    argmax_point: Optional[List[float]] = None


@dataclass
class ResidualReport:
    """Per-equation maxima of ``|residual|`` over a sample set."""

    tolerance: float
    samples: int = 0
    per_equation: List[EquationResult] = field(default_factory=list)
    tolerances: Dict[str, float] = field(default_factory=dict)
    # reported for comparison only; never part of the verdict
    informational: Set[str] = field(default_factory=set)

    def record(self, label: str, value: float, point=None):
        """Fold one residual into the running maximum for ``label``."""
        value = abs(float(value))
        for entry in self.per_equation:
            if entry.label == label:
                # NaN never compares greater; keep it so failures surface
                if value > entry.max_residual or math.isnan(value):
                    entry.max_residual = value
                    entry.argmax_point = None if point is None else [float(x) for x in point]
                return
        self.per_equation.append(EquationResult(
            label, value, None if point is None else [float(x) for x in point]))

    def tolerance_for(self, label: str) -> float:
        return self.tolerances.get(label, self.tolerance)

    @property
    def passed(self) -> bool:
        return all(e.max_residual < self.tolerance_for(e.label) for e in self.per_equation
                   if e.label not in self.informational)

    def max_for(self, label: str) -> float:
        for entry in self.per_equation:
            if entry.label == label:
                return entry.max_residual
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "perEquation": [
                {"label": e.label, "maxResidual": e.max_residual, "argmaxPoint": e.argmax_point,
                 **({"informational": True} if e.label in self.informational else {})}
                for e in self.per_equation
            ],
            "pass": self.passed,
        }
