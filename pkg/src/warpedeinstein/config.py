"""Numerical settings shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    closed_form: float = 1e-6      # closed formula vs. generic pipeline
    finite_difference: float = 1e-4
    fd_step: float = 1e-4          # scalar-field stencils
    metric_fd_step: float = 1e-4   # metric-derivative stencils
    singular_det: float = 1e-10    # |det g| below this is singular
    null: float = 1e-12            # causal-norm threshold for null directions
    ode_step: float = 1e-3
    sample_margin: float = 0.2     # keep phi, f above this in randomized oracles


DEFAULT = Tolerances()
