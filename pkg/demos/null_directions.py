"""
Null directions
===============

When ``alpha`` is null the Einstein constants are forced to zero and the
equations collapse to one linear ODE for ``phi``, given any positive ``f``:

    (n-2) f phi'' - m phi f'' - 2 m phi' f' = 0.
"""

# %%
# Exact null directions are best given as rationals. ``(5, 3, 4, 0)`` under
# ``-+++`` has causal norm ``-25 + 9 + 16 = 0`` with no rounding.

from fractions import Fraction

import numpy as np

from warpedeinstein import (Signature, classify_direction, exp_example_phi, ode_residual_null,
                            thm15_integrate)

d = classify_direction([Fraction(5), Fraction(3), Fraction(4), 0], Signature.from_string("-+++"))
print(d.kind, d.causal_norm)

# %%
# For ``f = e^(A xi)`` the ODE has constant-coefficient exponential
# solutions whose rates solve ``(n-2) r^2 - 2 m A r - m A^2 = 0``.

ex = exp_example_phi(n=4, m=2, A=1.0, c1=1.0, c2=0.5)
print("rates:", ex.roots)
print("residual at xi=0.3:", ode_residual_null(ex.pair(), 4, 2, 0.3).residual)

# %%
# The rates ``A (m +- sqrt(m (n-1)))/(n-2)`` agree with these only when
# ``m = 1``. For ``m = 2`` they leave an order-one residual.

print("alternative rates:", ex.alternative_roots)
print("their residual:", ode_residual_null(ex.pair(alternative=True), 4, 2, 0.3).residual)

# %%
# Any positive ``f`` works. RK4 integrates ``phi`` on a grid; the residual
# evaluated with a five-point stencil, independent of the stored ``phi''``,
# shows the discretization error.

from warpedeinstein.einstein import Profile

f = Profile(lambda x: (2 + np.sin(x), np.cos(x), -np.sin(x)), name="2 + sin")
sol = thm15_integrate(f, n=4, m=2, phi0=1.0, dphi0=0.0, span=(-1.0, 1.0))
print("nodes:", sol.xi.size, " phi(1) =", sol.phi[-1])
print("stencil residual:", np.abs(sol.stencil_residuals()).max())
