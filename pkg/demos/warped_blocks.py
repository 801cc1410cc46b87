"""
Block structure of a warped product
===================================

For ``(R^n, phi^-2 g) x_f F`` with a flat fiber, the Ricci tensor of the full
``(n+m)``-dimensional metric splits into a base block, a fiber block that is a
multiple of the fiber metric, and a mixed block that vanishes. The closed
block formulas are compared here with the generic pipeline run on the full
metric.
"""

# %%
# Random smooth ``phi`` and ``f`` on a Lorentzian base with a split-signature
# fiber.

import numpy as np

from warpedeinstein import (Signature, WarpedGeometry, flat_fiber_oracle, random_smooth_field,
                            warped_ricci)

rng = np.random.default_rng(7)
eps = Signature.from_string("-+++")
fiber = Signature.from_string("-+", min_dim=1)
geom = WarpedGeometry(eps, random_smooth_field(rng, 4), random_smooth_field(rng, 4), m=2)
p = np.array([0.1, -0.2, 0.05, 0.3])

blocks = warped_ricci(geom, p)
full = flat_fiber_oracle(geom, fiber, p)

print("base block difference :", np.abs(full[:4, :4] - blocks.base_base).max())
print("mixed block           :", np.abs(full[:4, 4:]).max())
print("fiber coefficient     :", blocks.fiber_coefficient)
print("fiber block           :\n", full[4:, 4:])

# %%
# The fiber block is the coefficient times the fiber metric ``diag(-1, 1)``.

print(np.allclose(full[4:, 4:], blocks.fiber_coefficient * fiber.metric(), atol=1e-10))
