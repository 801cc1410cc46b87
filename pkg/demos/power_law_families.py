"""
Ricci-flat power-law families
=============================

Two explicit families of Ricci-flat warped products depend on a single
variable ``xi = alpha . x``. ``thm13`` has a one-dimensional fiber and
``thm14`` a fiber of dimension ``m >= 2`` with two branches. Both live on a
half-space and blow up at its edge.
"""

# %%
# One-dimensional fiber
# ---------------------
# ``phi = (2/D)^(2/(n-2))`` and ``f = 2k/D`` with ``D = -(n-2) k1 xi + k2``.

import numpy as np

from warpedeinstein import (ProfilePair, Thm13Params, Thm14Params, domain_of,
                            ode_residuals_nonnull, thm13_profiles, thm14_profiles)
from warpedeinstein.einstein import Profile
from warpedeinstein.solutions import MINUS, PLUS

params = Thm13Params(n=4, k=1.0, k1=1.0, k2=2.0)
pair = thm13_profiles(params)
print("domain:", domain_of(params))
for xi in (-3.0, 0.0, 0.9, 0.999):
    (phi, _, _), (f, _, _) = pair(xi)
    print(f"xi={xi:6.3f}  phi={phi:10.4f}  f={f:10.4f}  "
          f"residuals={ode_residuals_nonnull(pair, 4, 1, 0.0, 0.0, 1, xi)}")

# %%
# The last row is round-off, not a failure: next to the edge the individual
# terms of the third residual are of order ``f phi^2 f''``, about ``1e18``.

(phi, _, _), (f, _, ddf) = pair(0.999)
print("relative size of the last residual:", 256.0 / (f * phi**2 * ddf))

# %%
# Fiber of dimension two
# ----------------------
# ``phi = k f^a``. The minus branch lives on ``xi < -k2/k1`` with exponent
# ``(m + beta)/(n - 2)``; the plus branch on the other side with
# ``(m - beta)/(n - 2)``.

for branch in (MINUS, PLUS):
    p = Thm14Params(n=4, m=2, branch=branch)
    pair = thm14_profiles(p)
    xi = -3.0 if branch == MINUS else -1.0
    r = ode_residuals_nonnull(pair, 4, 2, 0.0, 0.0, -1, xi)
    print(f"{branch:5s} beta={p.beta:.6f} exponent={p.alpha_exp:.6f} "
          f"domain={domain_of(p)} max residual={max(map(abs, r)):.1e}")

# %%
# Swapping the exponents between the branches breaks the equations, which is
# a quick way to see that the pairing matters.

minus = Thm14Params(4, 2, MINUS)
f = thm14_profiles(minus).f
a = (2 - minus.beta) / 2


def swapped(x):
    v, d1, d2 = f(x)
    return v**a, a * v**(a - 1) * d1, a * (a - 1) * v**(a - 2) * d1**2 + a * v**(a - 1) * d2


r = ode_residuals_nonnull(ProfilePair(Profile(swapped, f.domain), f), 4, 2, 0.0, 0.0, 1, -3.0)
print("swapped exponent residuals:", np.round(r, 4))
