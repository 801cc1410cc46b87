"""Seeded verification suites behind the command line.

Sampling uses NumPy's ``Generator(PCG64(seed))``. For ``verify`` every sample
draws, in this order, ``xi ~ U(window)`` and ``t ~ U([-1, 1]^n)`` and
evaluates at ``x = t + (xi - alpha.t) alpha / |alpha|^2`` so that
``alpha . x = xi``. For ``oracle`` every trial draws ``phi`` then ``f`` with
:func:`~warpedeinstein.diffgeo.random_smooth_field` and then points in
``[-1, 1]^n`` until both exceed the sampling margin.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .config import DEFAULT
from .diffgeo import (Signature, conformal_metric, random_smooth_field, ricci_generic)
from .einstein import (Direction, Profile, ProfilePair, ResidualReport, classify_direction,
                       constant_profile, lift_profiles, nonnull_residuals_at, null_residual_at,
                       pde_residuals)
from .errors import GeometryError
from .solutions import (MINUS, Thm13Params, Thm14Params, domain_of,
                        exp_example_phi, thm13_profiles, thm14_profiles, thm15_integrate)
from .warped import WarpedGeometry, conformal_ricci, warped_metric, warped_ricci


FAMILIES = ("thm13", "thm14", "thm15", "exp-example", "custom")
NULL_FAMILIES = ("thm15", "exp-example")

# half-line domains are sampled at distance [W/100, W] from the boundary
WINDOW_WIDTH = 50.0
WINDOW_MARGIN = 0.01

ORACLE_TOLERANCE = 1e-5

CSV_COLUMNS = ("xi", "phi", "dphi", "ddphi", "f", "df", "ddf",
               "res_eq5_1", "res_eq5_2", "res_eq5_3", "res_eq6", "flag")


class ConfigError(ValueError):
    """Invalid run configuration (usage error)."""


@dataclass
class RunConfig:
    command: str = "verify"
    n: int = 4
    m: Optional[int] = None
    eps: Optional[str] = None
    fiber_eps: Optional[str] = None
    lam: float = 0.0
    lambda_f: float = 0.0
    family: str = "thm13"
    branch: str = MINUS
    k: float = 1.0
    k1: float = 1.0
    k2: float = 2.0
    A: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    phi_expr: Optional[str] = None
    f_expr: Optional[str] = None
    xi0: float = 0.0
    phi0: float = 1.0
    dphi0: float = 0.0
    alpha: Optional[str] = None
    tol: Optional[float] = None
    fd_step: float = 0.0
    ode_step: float = DEFAULT.ode_step
    samples: int = 50
    seed: int = 0
    xi_range: Optional[str] = None
    xi_step: float = 0.01
    out: Optional[str] = None
    format: str = "json"

    def as_dict(self) -> dict:
        """Resolved settings in a fixed key order, for embedding in reports."""
        d = asdict(self)
        d["m"] = self.fiber_dim()
        d["eps"] = str(self.signature())
        d["fiber_eps"] = str(self.fiber_signature())
        d["alpha"] = ",".join(str(a) for a in self.alpha_values())
        d["tol"] = self.tolerance()
        d.pop("out")
        return d

    # -- resolution of defaults ------------------------------------------

    def fiber_dim(self) -> int:
        if self.command == "oracle":
            return 2 if self.m is None else self.m
        if self.family == "thm13":
            if self.m not in (None, 1):
                raise ConfigError("thm13 is the one-dimensional-fiber family; use --m 1")
            return 1
        if self.family == "thm14":
            m = 2 if self.m is None else self.m
            if m < 2:
                raise ConfigError("thm14 needs --m >= 2")
            return m
        return 1 if self.m is None else self.m

    def signature(self) -> Signature:
        text = self.eps if self.eps is not None else "-" + "+" * (self.n - 1)
        try:
            sig = Signature.from_string(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if sig.n != self.n:
            raise ConfigError(f"signature {text!r} has {sig.n} entries but --n is {self.n}")
        return sig

    def fiber_signature(self) -> Signature:
        m = self.fiber_dim()
        text = self.fiber_eps if self.fiber_eps is not None else "+" * m
        try:
            sig = Signature.from_string(text, min_dim=1)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if sig.n != m:
            raise ConfigError(f"fiber signature {text!r} has {sig.n} entries, fiber dimension is {m}")
        return sig

    def alpha_values(self) -> List[Fraction]:
        if self.alpha is None:
            vec = [Fraction(0)] * self.n
            if self.family in NULL_FAMILIES:
                vec[0] = vec[1] = Fraction(1)
            else:
                vec[-1] = Fraction(1)
            return vec
        try:
            vec = [Fraction(s.strip()) for s in self.alpha.split(",")]
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse direction {self.alpha!r}") from None
        if len(vec) != self.n:
            raise ConfigError(f"direction has {len(vec)} entries but --n is {self.n}")
        return vec

    def direction(self) -> Direction:
        try:
            return classify_direction(self.alpha_values(), self.signature())
        except GeometryError as exc:
            raise ConfigError(str(exc)) from None

    def tolerance(self) -> float:
        if self.tol is not None:
            return self.tol
        return ORACLE_TOLERANCE if self.command == "oracle" else DEFAULT.closed_form


# --------------------------------------------------------------------------
# families
# --------------------------------------------------------------------------

def expression_profile(text: str, name: str) -> Profile:
    """Profile from a sympy expression in ``xi`` with exact derivatives."""
    import sympy

    xi = sympy.Symbol("xi", real=True)
    try:
        expr = sympy.sympify(text, locals={"xi": xi})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse {name} expression {text!r}: {exc}") from None
    if expr.free_symbols - {xi}:
        raise ConfigError(f"{name} expression may only use xi, got {expr.free_symbols}")
    fns = [sympy.lambdify(xi, e, "math") for e in (expr, expr.diff(xi), expr.diff(xi, 2))]
    return Profile(lambda x: tuple(float(g(x)) for g in fns), name=f"{name} = {text}")


def sampling_window(domain: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = domain
    w, gap = WINDOW_WIDTH, WINDOW_MARGIN * WINDOW_WIDTH
    if math.isinf(lo) and math.isinf(hi):
        return (-1.0, 1.0)
    if math.isinf(lo):
        return (hi - w, hi - gap)
    if math.isinf(hi):
        return (lo + gap, lo + w)
    span = hi - lo
    return (lo + WINDOW_MARGIN * span, hi - WINDOW_MARGIN * span)


def parse_range(text: str) -> Tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(","))
    except ValueError:
        raise ConfigError(f"range must be 'lo,hi', got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"empty range {text!r}")
    return lo, hi


def build_profiles(cfg: RunConfig, span: Optional[Tuple[float, float]] = None) -> ProfilePair:
    """Profiles for the configured family.

    ``span`` is only used by ``thm15``, which has to integrate over the
    interval it will later be evaluated on.
    """
    n, m = cfg.n, cfg.fiber_dim()
    try:
        if cfg.family == "thm13":
            return thm13_profiles(Thm13Params(n, cfg.k, cfg.k1, cfg.k2))
        if cfg.family == "thm14":
            return thm14_profiles(Thm14Params(n, m, cfg.branch, cfg.k, cfg.k1, cfg.k2))
        if cfg.family == "exp-example":
            ex = exp_example_phi(n, m, cfg.A, cfg.c1, cfg.c2, cfg.k)
            return ex.pair()
        if cfg.family == "thm15":
            f = (expression_profile(cfg.f_expr, "f") if cfg.f_expr
                 else exp_example_phi(n, m, cfg.A, k=cfg.k).f)
            lo, hi = span if span is not None else (cfg.xi0 - 1.0, cfg.xi0 + 1.0)
            lo, hi = min(lo, cfg.xi0), max(hi, cfg.xi0)
            run = thm15_integrate(f, n, m, cfg.xi0, cfg.phi0, cfg.dphi0, cfg.ode_step, (lo, hi))
            return run.pair()
        if cfg.family == "custom":
            phi = expression_profile(cfg.phi_expr, "phi") if cfg.phi_expr else constant_profile(1.0)
            f = expression_profile(cfg.f_expr, "f") if cfg.f_expr else constant_profile(1.0)
            return ProfilePair(phi, f)
    except GeometryError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown family {cfg.family!r}; choose from {', '.join(FAMILIES)}")


def family_domain(cfg: RunConfig) -> Tuple[float, float]:
    if cfg.family == "thm13":
        return domain_of(Thm13Params(cfg.n, cfg.k, cfg.k1, cfg.k2))
    if cfg.family == "thm14":
        return domain_of(Thm14Params(cfg.n, cfg.fiber_dim(), cfg.branch, cfg.k, cfg.k1, cfg.k2))
    return (-math.inf, math.inf)


def lift_point(alpha: np.ndarray, xi: float, t: np.ndarray) -> np.ndarray:
    return t + (xi - alpha @ t) / (alpha @ alpha) * alpha


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def _record_pde(report, res, x):
    for label in ("eq2", "eq3", "eq4"):
        vals = [abs(v) for k, v in res.items() if k.startswith(label)]
        if vals:
            report.record(label, max(vals), x)


ALTERNATIVE_LABEL = "eq6.alternative_exponents"


def _pair_text(pair) -> str:
    return "(" + ", ".join(format(v, ".17g") for v in pair) + ")"


def verify(cfg: RunConfig) -> Tuple[ResidualReport, List[str]]:
    """Residuals of the PDE system, its ODE reduction and the flat-fiber oracle."""
    eps = cfg.signature()
    m = cfg.fiber_dim()
    direction = cfg.direction()
    fiber_eps = cfg.fiber_signature()
    if m == 1 and cfg.lambda_f != 0:
        raise ConfigError("a one-dimensional fiber is flat: --lambdaF must be 0")
    window = (parse_range(cfg.xi_range) if cfg.xi_range
              else sampling_window(family_domain(cfg)))
    pair = build_profiles(cfg, span=window)
    phi_field, f_field = lift_profiles(pair, direction)
    geom = WarpedGeometry(eps, phi_field, f_field, m, cfg.lambda_f)
    full = warped_metric(geom, fiber_eps)
    if cfg.fd_step > 0:
        full.dg = full.d2g = None
        full.fd_step = cfg.fd_step

    report = ResidualReport(cfg.tolerance(), samples=cfg.samples)
    warnings = []
    if cfg.lambda_f != 0:
        warnings.append("flat-fiber oracle skipped: it realizes lambda_F = 0 only")
    if direction.is_null and (cfg.lam != 0 or cfg.lambda_f != 0):
        warnings.append("null direction admits only lambda = lambda_F = 0")

    # the exponents A(m +- sqrt(m(n-1)))/(n-2) solve the null ODE only for m = 1;
    # report how far off they are next to the characteristic roots
    alternative = None
    if cfg.family == "exp-example":
        ex = exp_example_phi(cfg.n, m, cfg.A, cfg.c1, cfg.c2, cfg.k)
        alternative = ex.pair(alternative=True)
        report.informational.add(ALTERNATIVE_LABEL)
        warnings.append(f"characteristic rates {_pair_text(ex.roots)}; alternative rates "
                        f"{_pair_text(ex.alternative_roots)} reported as {ALTERNATIVE_LABEL}")

    rng = np.random.default_rng(cfg.seed)
    alpha = direction.alpha
    for _ in range(cfg.samples):
        xi = rng.uniform(*window)
        t = rng.uniform(-1.0, 1.0, cfg.n)
        x = lift_point(alpha, xi, t)
        try:
            _record_pde(report, pde_residuals(geom, cfg.lam, x), x)
            ph, fv = pair(float(alpha @ x))
            if direction.is_null:
                report.record("eq6", null_residual_at(cfg.n, m, ph, fv), x)
                report.record("eq6.constraint", max(abs(cfg.lam), abs(cfg.lambda_f)), x)
            else:
                r = nonnull_residuals_at(cfg.n, m, cfg.lam, cfg.lambda_f, direction.sign, ph, fv)
                for i, v in enumerate(r, 1):
                    report.record(f"eq5.{i}", v, x)
            if alternative is not None:
                report.record(ALTERNATIVE_LABEL,
                              null_residual_at(cfg.n, m, *alternative(float(alpha @ x))), x)
            if cfg.lambda_f == 0:
                ric = ricci_generic(full, np.concatenate([x, np.zeros(m)])).ricci
                report.record("oracle.einstein", np.abs(ric - cfg.lam * full.metric(
                    np.concatenate([x, np.zeros(m)]))).max(), x)
                report.record("oracle.mixed", np.abs(ric[:cfg.n, cfg.n:]).max(), x)
        except GeometryError as exc:
            report.record("domain", math.inf, x)
            warnings.append(f"{type(exc).__name__}: {exc}")
    if cfg.samples == 0:
        warnings.append("no samples requested; report is empty")
    return report, warnings


# --------------------------------------------------------------------------
# oracle
# --------------------------------------------------------------------------

def _draw_trial(rng, n, margin, max_tries=1000):
    phi = random_smooth_field(rng, n)
    f = random_smooth_field(rng, n)
    for _ in range(max_tries):
        p = rng.uniform(-1.0, 1.0, n)
        if phi.value(p) > margin and f.value(p) > margin:
            return phi, f, p
    raise RuntimeError("could not find a sample point above the margin")


def oracle(cfg: RunConfig) -> Tuple[ResidualReport, List[str]]:
    """Closed formulas against the generic pipeline on random smooth ``(phi, f)``."""
    if cfg.lambda_f != 0:
        raise ConfigError("the flat-fiber oracle needs --lambdaF 0")
    eps = cfg.signature()
    m = cfg.fiber_dim()
    fiber_eps = cfg.fiber_signature()
    eta = fiber_eps.array()
    tol = cfg.tolerance()
    report = ResidualReport(tol, samples=cfg.samples,
                            tolerances={"mixed_block": min(tol, DEFAULT.closed_form)})
    warnings = []
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    for _ in range(cfg.samples):
        phi, f, p = _draw_trial(rng, n, DEFAULT.sample_margin)
        geom = WarpedGeometry(eps, phi, f, m)
        base, full = conformal_metric(eps, phi), warped_metric(geom, fiber_eps)
        if cfg.fd_step > 0:
            for metric in (base, full):
                metric.dg = metric.d2g = None
                metric.fd_step = cfg.fd_step
        report.record("conformal_ricci",
                      np.abs(conformal_ricci(geom, p) - ricci_generic(base, p).ricci).max(), p)
        ric = ricci_generic(full, np.concatenate([p, np.zeros(m)])).ricci
        w = warped_ricci(geom, p)
        report.record("base_block", np.abs(ric[:n, :n] - w.base_base).max(), p)
        report.record("mixed_block", np.abs(ric[:n, n:]).max(), p)
        report.record("fiber_block", np.abs(ric[n:, n:] - w.fiber_coefficient * np.diag(eta)).max(), p)
    if cfg.samples == 0:
        warnings.append("no trials requested; report is empty")
    return report, warnings


# --------------------------------------------------------------------------
# sample
# --------------------------------------------------------------------------

def grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def sample_rows(cfg: RunConfig) -> Tuple[List[dict], List[str]]:
    """Profile values and ODE residuals on an even grid in ``xi``."""
    if not cfg.xi_step > 0:
        raise ConfigError("--xi-step must be positive")
    m = cfg.fiber_dim()
    direction = cfg.direction()
    if m == 1 and cfg.lambda_f != 0:
        raise ConfigError("a one-dimensional fiber is flat: --lambdaF must be 0")
    lo, hi = (parse_range(cfg.xi_range) if cfg.xi_range
              else sampling_window(family_domain(cfg)))
    xs = grid(lo, hi, cfg.xi_step)
    pair = build_profiles(cfg, span=(float(xs[0]), float(xs[-1])))
    rows, warnings = [], []
    clipped = 0
    for xi in xs:
        row = dict.fromkeys(CSV_COLUMNS, "")
        row["xi"] = float(xi)
        try:
            ph, fv = pair(float(xi))
        except GeometryError:
            row["flag"] = "clipped"
            clipped += 1
            rows.append(row)
            continue
        row.update(zip(("phi", "dphi", "ddphi"), ph))
        row.update(zip(("f", "df", "ddf"), fv))
        if not direction.is_null:
            r = nonnull_residuals_at(cfg.n, m, cfg.lam, cfg.lambda_f, direction.sign, ph, fv)
            row.update(zip(("res_eq5_1", "res_eq5_2", "res_eq5_3"), r))
        row["res_eq6"] = null_residual_at(cfg.n, m, ph, fv)
        rows.append(row)
    if clipped:
        warnings.append(f"{clipped} grid points outside the domain were clipped")
    return rows, warnings


def _fmt(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_sample_csv(text: str) -> List[dict]:
    """Parse a table written by :func:`rows_to_csv`; blank cells become ``None``."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    out = []
    for rec in reader:
        row = {k: (None if rec[k] == "" else float(rec[k])) for k in CSV_COLUMNS if k != "flag"}
        row["flag"] = rec["flag"]
        out.append(row)
    return out


def recompute_residuals(row: dict, n: int, m: int, lam: float, lambda_f: float,
                        eps_i0: int = 0) -> dict:
    """ODE residuals from the profile columns of a parsed row."""
    ph = (row["phi"], row["dphi"], row["ddphi"])
    fv = (row["f"], row["df"], row["ddf"])
    out = {"res_eq6": null_residual_at(n, m, ph, fv)}
    if eps_i0:
        out.update(zip(("res_eq5_1", "res_eq5_2", "res_eq5_3"),
                       nonnull_residuals_at(n, m, lam, lambda_f, eps_i0, ph, fv)))
    return out


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _json(obj) -> str:
    """JSON with floats at 17 significant digits and insertion-ordered keys."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isfinite(obj):
            return format(obj, ".17g")
        return json.dumps(str(obj))
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_json(cfg: RunConfig, report: ResidualReport) -> str:
    body = report.to_dict()
    doc = {"config": cfg.as_dict(), "perEquation": body["perEquation"],
           "pass": body["pass"], "toolVersion": __version__}
    return _json(doc) + "\n"


def report_csv(report: ResidualReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(("label", "maxResidual", "argmaxPoint", "pass"))
    for e in report.per_equation:
        point = "" if e.argmax_point is None else " ".join(_fmt(v) for v in e.argmax_point)
        verdict = ("info" if e.label in report.informational
                   else str(e.max_residual < report.tolerance_for(e.label)).lower())
        w.writerow((e.label, _fmt(e.max_residual), point, verdict))
    return buf.getvalue()
