"""
Curvature of a conformally flat metric
======================================

The generic pipeline takes any metric field and returns Christoffel symbols,
Ricci and scalar curvature. Here it is pointed at the half-space model of
hyperbolic space, ``g = x_1^-2 (dx_1^2 + ... + dx_n^2)``, whose Ricci tensor
is ``-(n-1) g``.
"""

# %%
# The metric is ``phi^-2 g`` with ``phi = x_1``.

import numpy as np

from warpedeinstein import (Signature, WarpedGeometry, conformal_metric, conformal_ricci,
                            constant_field, linear_field, ricci_generic)

eps = Signature.from_string("++++")
phi = linear_field([1.0, 0, 0, 0])
metric = conformal_metric(eps, phi)

curv = ricci_generic(metric, [2.0, 0.3, -0.1, 0.5])
print("Ric =\n", np.round(curv.ricci, 12))
print("scalar curvature:", curv.scalar)

# %%
# The closed conformal formula gives the same tensor without touching
# Christoffel symbols. ``f`` plays no part in the base curvature.

geom = WarpedGeometry(eps, phi, constant_field(1.0, 4), m=1)
print("closed form - generic:", np.abs(conformal_ricci(geom, [2.0, 0.3, -0.1, 0.5])
                                       - curv.ricci).max())

# %%
# Metric derivatives can also come from central differences. The error is
# then set by the stencil step rather than by round-off.

from warpedeinstein import MetricField

stencil = MetricField(4, metric.g, fd_step=1e-4)
print("stencil - analytic:", np.abs(ricci_generic(stencil, [2.0, 0.3, -0.1, 0.5]).ricci
                                    - curv.ricci).max())
