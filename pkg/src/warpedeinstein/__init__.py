"""Numerical verification of warped-product semi-Riemannian Einstein metrics.

Base ``(R^n, phi^-2 g)`` with ``g`` pseudo-Euclidean, warped by ``f`` over an
Einstein fiber. Closed curvature formulas, their PDE/ODE residual forms,
explicit Ricci-flat families, and a generic curvature pipeline used as an
independent reference.
"""

__version__ = "0.1.0"

from .config import DEFAULT, Tolerances
from .diffgeo import (CurvatureAtPoint, MetricField, ScalarField, Signature, christoffel,
                      conformal_metric, constant_field, einstein_residual_generic,
                      finite_difference_field, flat_metric, linear_field, quadratic_field,
                      random_smooth_field, ricci_generic, smooth_field)
from .einstein import (CausalClass, Direction, Profile, ProfilePair, ResidualReport,
                       bakry_emery_residual, classify_direction, lift_profiles,
                       ode_residual_null, ode_residuals_nonnull, pde_from_ode, pde_residuals)
from .errors import (BlowUpError, DomainError, EvaluationError, GeometryError,
                     SingularMetricError)
from .solutions import (ExpExample, NullProfile, Thm13Params, Thm14Params, domain_of,
                        exp_example_phi, thm13_profiles, thm14_profiles, thm15_integrate)
from .warped import (WarpedGeometry, WarpedRicciComponents, conformal_hessian, conformal_ricci,
                     flat_fiber_oracle, warped_metric, warped_ricci)

__all__ = [
    "bakry_emery_residual", "BlowUpError", "CausalClass", "christoffel", "classify_direction",
    "conformal_hessian", "conformal_metric", "conformal_ricci", "constant_field",
    "CurvatureAtPoint", "DEFAULT", "Direction", "domain_of", "DomainError",
    "einstein_residual_generic", "EvaluationError", "exp_example_phi", "ExpExample",
    "finite_difference_field", "flat_fiber_oracle", "flat_metric", "GeometryError",
    "lift_profiles", "linear_field", "MetricField", "NullProfile", "ode_residual_null",
    "ode_residuals_nonnull", "pde_from_ode", "pde_residuals", "Profile", "ProfilePair",
    "quadratic_field", "random_smooth_field", "ResidualReport", "ricci_generic", "ScalarField",
    "Signature", "SingularMetricError", "smooth_field", "thm13_profiles", "Thm13Params",
    "thm14_profiles", "Thm14Params", "thm15_integrate", "Tolerances", "warped_metric",
    "warped_ricci", "WarpedGeometry", "WarpedRicciComponents",
    "__version__",
]
