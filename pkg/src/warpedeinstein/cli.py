"""Command line: ``warpedeinstein verify|sample|oracle``.

Exit status: 0 pass, 1 residual failure, 2 usage error.

A flat JSON config file may be given with ``--config``; its keys are the
long option names without dashes (``"lambdaF": 0``, ``"fd-step": 1e-4``).
Flags on the command line override the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import GeometryError
from .suites import (FAMILIES, ConfigError, RunConfig, oracle, report_csv, report_json,
                     rows_to_csv, sample_rows, verify)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# option -> RunConfig attribute
OPTIONS = {
    "n": ("n", int), "m": ("m", int), "eps": ("eps", str), "fiber-eps": ("fiber_eps", str),
    "lambda": ("lam", float), "lambdaF": ("lambda_f", float),
    "family": ("family", str), "branch": ("branch", str),
    "k": ("k", float), "k1": ("k1", float), "k2": ("k2", float),
    "A": ("A", float), "c1": ("c1", float), "c2": ("c2", float),
    "phi": ("phi_expr", str), "f": ("f_expr", str),
    "xi0": ("xi0", float), "phi0": ("phi0", float), "dphi0": ("dphi0", float),
    "alpha": ("alpha", str), "tol": ("tol", float),
    "fd-step": ("fd_step", float), "ode-step": ("ode_step", float),
    "samples": ("samples", int), "seed": ("seed", int),
    "xi-range": ("xi_range", str), "xi-step": ("xi_step", float),
    "out": ("out", str), "format": ("format", str),
}

HELP = {
    "eps": "base signature string such as '-+++'",
    "fiber-eps": "flat fiber signature used by the oracle, e.g. '-+'",
    "family": "one of: " + ", ".join(FAMILIES),
    "branch": "thm14 branch: minus or plus",
    "phi": "custom phi(xi) as an expression in xi",
    "f": "custom f(xi) as an expression in xi (custom and thm15 families)",
    "alpha": "direction as comma-separated rationals, e.g. '1,1,0,0' or '1/2,0,0,1'",
    "fd-step": "metric-derivative stencil step for the oracle; 0 = analytic",
    "samples": "sample points (verify) or randomized trials (oracle)",
    "xi-range": "'lo,hi' interval in xi (default: a window inside the domain)",
    "format": "json or csv",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="warpedeinstein", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("verify", "residuals of a solution family"),
                       ("sample", "tabulate profiles and ODE residuals on a grid"),
                       ("oracle", "closed formulas vs. the generic curvature pipeline")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="flat JSON file with default option values")
        for opt, (dest, typ) in OPTIONS.items():
            p.add_argument(f"--{opt}", dest=dest, type=typ, default=None, help=HELP.get(opt))
    return parser


def _attach_values(argv):
    """Join ``--opt value`` into ``--opt=value``.

    Signature strings and ranges start with ``-`` and would otherwise be read
    as option names.
    """
    known = {f"--{opt}" for opt in OPTIONS} | {"--config"}
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in known and i + 1 < len(argv):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


def load_config(argv=None) -> RunConfig:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    cfg = RunConfig(command=args.command)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        for key, value in data.items():
            if key not in OPTIONS:
                raise ConfigError(f"unknown config key {key!r}")
            dest, typ = OPTIONS[key]
            setattr(cfg, dest, None if value is None else typ(value))
    for opt, (dest, _) in OPTIONS.items():
        value = getattr(args, dest)
        if value is not None:
            setattr(cfg, dest, value)
    if cfg.n < 3:
        raise ConfigError("--n must be at least 3")
    if cfg.format not in ("json", "csv"):
        raise ConfigError("--format must be json or csv")
    if cfg.samples < 0:
        raise ConfigError("--samples must be non-negative")
    return cfg


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    if cfg.command == "sample":
        rows, warnings = sample_rows(cfg)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        _emit(rows_to_csv(rows), cfg.out)
        return EXIT_PASS

    report, warnings = (verify if cfg.command == "verify" else oracle)(cfg)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(report_csv(report) if cfg.format == "csv" else report_json(cfg, report), cfg.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    try:
        cfg = load_config(argv)
        cfg.as_dict()  # resolve defaults early so bad combinations are usage errors
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
