"""Pseudo-Euclidean primitives, scalar fields and a generic curvature pipeline.

The pipeline ``metric -> christoffel -> ricci -> scalar`` knows nothing about
conformal factors or warped products; it only sees a matrix-valued function
and its first two coordinate derivatives. That makes it the independent
reference against which the closed formulas in :mod:`warpedeinstein.warped`
are checked.

Array conventions::

    dg[k, i, j]       = d_k g_ij
    d2g[l, k, i, j]   = d_l d_k g_ij
    gamma[k, i, j]    = Gamma^k_ij
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT
from .errors import EvaluationError, SingularMetricError


# --------------------------------------------------------------------------
# signature and points
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Diagonal signs of a pseudo-Euclidean metric ``g_ij = delta_ij eps_i``.

    Base signatures need at least three entries; pass ``min_dim=1`` for a
    fiber signature.
    """

    eps: tuple
    min_dim: int = 3

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        if any(e not in (1, -1) for e in self.eps):
            raise ValueError(f"signature entries must be +1 or -1, got {self.eps!r}")
        if len(eps) < self.min_dim:
            raise ValueError(
                f"signature needs at least {self.min_dim} entries, got {len(eps)}")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def from_string(cls, text: str, min_dim: int = 3) -> "Signature":
        """Parse ``"-+++"``; the unicode minus is accepted as well."""
        table = {"+": 1, "-": -1, "−": -1}
        try:
            eps = tuple(table[c] for c in text.strip())
        except KeyError as exc:
            raise ValueError(f"bad signature character {exc.args[0]!r} in {text!r}") from None
        return cls(eps, min_dim=min_dim)

    @property
    def n(self) -> int:
        return len(self.eps)

    def __len__(self):
        return len(self.eps)

    def array(self) -> np.ndarray:
        return np.asarray(self.eps, dtype=float)

    def metric(self) -> np.ndarray:
        return np.diag(self.array())

    def __str__(self):
        return "".join("+" if e > 0 else "-" for e in self.eps)


def as_point(x, n: Optional[int] = None) -> np.ndarray:
    p = np.asarray(x, dtype=float).reshape(-1)
    if n is not None and p.shape[0] != n:
        raise ValueError(f"point has {p.shape[0]} coordinates, expected {n}")
    return p


# --------------------------------------------------------------------------
# scalar fields
# --------------------------------------------------------------------------

class ScalarField:
    """A scalar function on R^n returning ``(value, grad, hess)`` at a point.

    ``fn`` must return the full derivative triple. The Hessian is symmetrized
    on the way out so stencil or round-off asymmetry never reaches curvature
    code.
    """

    def __init__(self, fn: Callable, n: int, name: str = ""):
        self._fn = fn
        self.n = int(n)
        self.name = name

    def __call__(self, x):
        p = as_point(x, self.n)
        value, grad, hess = self._fn(p)
        grad = np.asarray(grad, dtype=float).reshape(self.n)
        hess = np.asarray(hess, dtype=float).reshape(self.n, self.n)
        return float(value), grad, 0.5 * (hess + hess.T)

    def value(self, x) -> float:
        return self(x)[0]

    def __repr__(self):
        return f"ScalarField(n={self.n}, name={self.name!r})"


def finite_difference_field(value_fn: Callable, n: int, step: float = DEFAULT.fd_step,
                            name: str = "") -> ScalarField:
    """Wrap a plain value function with central-difference derivatives.

    Gradient and Hessian are second-order accurate in ``step``.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    h = float(step)

    def f(q):
        v = float(value_fn(q))
        if not np.isfinite(v):
            raise EvaluationError(f"non-finite value {v} at {q.tolist()}", point=q.copy())
        return v

    def triple(p):
        v0 = f(p)
        grad = np.empty(n)
        hess = np.empty((n, n))
        e = np.eye(n) * h
        plus = [f(p + e[i]) for i in range(n)]
        minus = [f(p - e[i]) for i in range(n)]
        for i in range(n):
            grad[i] = (plus[i] - minus[i]) / (2 * h)
            hess[i, i] = (plus[i] - 2 * v0 + minus[i]) / h**2
            for j in range(i + 1, n):
                hij = (f(p + e[i] + e[j]) - f(p + e[i] - e[j])
                       - f(p - e[i] + e[j]) + f(p - e[i] - e[j])) / (4 * h**2)
                hess[i, j] = hess[j, i] = hij
        return v0, grad, hess

    return ScalarField(triple, n, name=name or "finite-difference")


def constant_field(c: float, n: int) -> ScalarField:
    c = float(c)
    return ScalarField(lambda p: (c, np.zeros(n), np.zeros((n, n))), n, name=f"const {c:g}")


def linear_field(b, c0: float = 0.0) -> ScalarField:
    b = np.asarray(b, dtype=float)
    n = b.size
    return ScalarField(lambda p: (c0 + b @ p, b.copy(), np.zeros((n, n))), n, name="linear")


def quadratic_field(c0: float, b, a) -> ScalarField:
    """``c0 + b.x + x.A.x / 2`` with ``A`` symmetrized."""
    b = np.asarray(b, dtype=float)
    a = np.asarray(a, dtype=float)
    a = 0.5 * (a + a.T)
    return ScalarField(lambda p: (c0 + b @ p + 0.5 * p @ a @ p, b + a @ p, a.copy()),
                       b.size, name="quadratic")


def smooth_field(c0: float, b, a, amp: float, w, phase: float) -> ScalarField:
    """Quadratic plus a plane wave: ``c0 + b.x + x.A.x/2 + amp*sin(w.x + phase)``."""
    b = np.asarray(b, dtype=float)
    a = np.asarray(a, dtype=float)
    a = 0.5 * (a + a.T)
    w = np.asarray(w, dtype=float)

    def triple(p):
        s = w @ p + phase
        value = c0 + b @ p + 0.5 * p @ a @ p + amp * np.sin(s)
        grad = b + a @ p + amp * np.cos(s) * w
        hess = a - amp * np.sin(s) * np.outer(w, w)
        return value, grad, hess

    return ScalarField(triple, b.size, name="smooth")


def random_smooth_field(rng: np.random.Generator, n: int, offset: float = 1.5,
                        scale: float = 0.3) -> ScalarField:
    """Draw a :func:`smooth_field` whose value stays near ``offset`` on [-1, 1]^n."""
    b = rng.uniform(-scale, scale, n)
    a = rng.uniform(-scale, scale, (n, n))
    w = rng.uniform(-1.0, 1.0, n)
    return smooth_field(offset, b, a, scale * rng.uniform(0.2, 1.0), w,
                        rng.uniform(0, 2 * np.pi))


# --------------------------------------------------------------------------
# metrics and curvature
# --------------------------------------------------------------------------

@dataclass
class MetricField:
    """A symmetric matrix field with (optional) analytic derivatives.

    Missing ``dg``/``d2g`` are filled by central differences of ``g`` with
    step ``fd_step``.
    """

    dim: int
    g: Callable
    dg: Optional[Callable] = None
    d2g: Optional[Callable] = None
    fd_step: float = DEFAULT.metric_fd_step

    def metric(self, p) -> np.ndarray:
        m = np.asarray(self.g(as_point(p, self.dim)), dtype=float)
        if not np.all(np.isfinite(m)):
            raise EvaluationError(f"non-finite metric at {list(p)}", point=np.array(p))
        return 0.5 * (m + m.T)

    def first(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        if self.dg is not None:
            out = np.asarray(self.dg(p), dtype=float)
        else:
            h = self.fd_step
            out = np.empty((self.dim, self.dim, self.dim))
            for k in range(self.dim):
                e = np.zeros(self.dim)
                e[k] = h
                out[k] = (self.metric(p + e) - self.metric(p - e)) / (2 * h)
        return 0.5 * (out + out.transpose(0, 2, 1))

    def second(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        d = self.dim
        if self.d2g is not None:
            out = np.asarray(self.d2g(p), dtype=float)
        elif self.dg is not None:
            # one stencil on top of analytic first derivatives
            h = self.fd_step
            out = np.empty((d, d, d, d))
            for l in range(d):
                e = np.zeros(d)
                e[l] = h
                out[l] = (self.first(p + e) - self.first(p - e)) / (2 * h)
        else:
            h = self.fd_step
            out = np.empty((d, d, d, d))
            g0 = self.metric(p)
            eye = np.eye(d) * h
            for k in range(d):
                out[k, k] = (self.metric(p + eye[k]) - 2 * g0 + self.metric(p - eye[k])) / h**2
                for l in range(k + 1, d):
                    out[k, l] = out[l, k] = (
                        self.metric(p + eye[k] + eye[l]) - self.metric(p + eye[k] - eye[l])
                        - self.metric(p - eye[k] + eye[l]) + self.metric(p - eye[k] - eye[l])
                    ) / (4 * h**2)
        out = 0.5 * (out + out.transpose(0, 1, 3, 2))
        return 0.5 * (out + out.transpose(1, 0, 2, 3))


def flat_metric(eps: Signature) -> MetricField:
    d = eps.n
    g = eps.metric()
    return MetricField(d, lambda p: g,
                       dg=lambda p: np.zeros((d, d, d)),
                       d2g=lambda p: np.zeros((d, d, d, d)))


def conformal_metric(eps: Signature, phi: ScalarField) -> MetricField:
    """``phi^-2 g`` with derivatives obtained by the chain rule from phi's triple."""
    d = eps.n
    e = eps.array()

    def g(p):
        v = phi(p)[0]
        return np.diag(e / v**2)

    def dg(p):
        v, gr, _ = phi(p)
        out = np.zeros((d, d, d))
        out[:, np.arange(d), np.arange(d)] = np.outer(-2 * gr / v**3, e)
        return out

    def d2g(p):
        v, gr, H = phi(p)
        c = 6 * np.outer(gr, gr) / v**4 - 2 * H / v**3
        out = np.zeros((d, d, d, d))
        out[:, :, np.arange(d), np.arange(d)] = c[:, :, None] * e
        return out

    return MetricField(d, g, dg, d2g)


@dataclass
class CurvatureAtPoint:
    christoffel: np.ndarray
    ricci: np.ndarray
    scalar: float


def _inverse(g: np.ndarray, threshold: float) -> np.ndarray:
    det = np.linalg.det(g)
    if not abs(det) >= threshold:
        raise SingularMetricError(f"|det g| = {abs(det):.3e} below {threshold:g}")
    return np.linalg.inv(g)


def _christoffel_parts(metric: MetricField, p, threshold: float):
    g = metric.metric(p)
    ginv = _inverse(g, threshold)
    dg = metric.first(p)
    # S[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    s = dg.transpose(2, 0, 1) + dg.transpose(1, 2, 0) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, s)
    return g, ginv, dg, s, 0.5 * (gamma + gamma.transpose(0, 2, 1))


def christoffel(metric: MetricField, p, threshold: float = DEFAULT.singular_det) -> np.ndarray:
    """Christoffel symbols ``gamma[k, i, j] = Gamma^k_ij`` of ``metric`` at ``p``."""
    return _christoffel_parts(metric, p, threshold)[-1]


def ricci_generic(metric: MetricField, p, threshold: float = DEFAULT.singular_det) -> CurvatureAtPoint:
    """Ricci tensor and scalar curvature from the metric and its derivatives."""
    g, ginv, dg, s, gamma = _christoffel_parts(metric, p, threshold)
    d2g = metric.second(p)
    # d_m S[l, i, j]
    ds = d2g.transpose(0, 3, 1, 2) + d2g.transpose(0, 2, 3, 1) - d2g
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dgamma = 0.5 * (np.einsum("mkl,lij->mkij", dginv, s) + np.einsum("kl,mlij->mkij", ginv, ds))

    ric = (np.einsum("kkij->ij", dgamma)
           - np.einsum("jkik->ij", dgamma)
           + np.einsum("kkl,lij->ij", gamma, gamma)
           - np.einsum("kjl,lik->ij", gamma, gamma))
    ric = 0.5 * (ric + ric.T)
    return CurvatureAtPoint(gamma, ric, float(np.einsum("ij,ij->", ginv, ric)))


def einstein_residual_generic(metric: MetricField, lam: float, p,
                              threshold: float = DEFAULT.singular_det) -> np.ndarray:
    """``Ric(p) - lam * g(p)``."""
    return ricci_generic(metric, p, threshold).ricci - lam * metric.metric(p)


def covariant_hessian(metric: MetricField, field: ScalarField, p,
                      threshold: float = DEFAULT.singular_det) -> np.ndarray:
    """``Hess f_ij = f_ij - Gamma^k_ij f_k`` for a metric on the field's own space."""
    _, grad, hess = field(p)
    return hess - np.einsum("kij,k->ij", christoffel(metric, p, threshold), grad)
