"""Evaluate a Whittaker function on U(2,2) and show both Schmid operators kill it.

A small multiplicative bend of the coefficients is enough to break the
differential equations, which is what the residual is meant to detect.
"""
import numpy as np

from quatlift import make_space
from quatlift.group_lie import VellElement, m_of
from quatlift.whittaker_schmid import WhittakerSpec, scalar_system_residual, schmid_apply, whittaker

space = make_space(2, 1)
T = space.rat_to_arch(np.array([0, 0.8, 0.3j, 0]))
spec = WhittakerSpec(space, T, ell=3)

c, s = np.cosh(0.4), np.sinh(0.4)
h, z = np.array([[c, s], [s, c]]), 0.9 * np.exp(0.6j)
g = m_of(space, h, z)

print("W_T(m) coefficients:")
for v, w in zip(range(-3, 4), whittaker(spec, g).coeffs):
    print(f"  v={v:+d}  {w:.6e}")

for sign in "+-":
    print(f"Schmid {sign} residual: {schmid_apply(space, lambda x: whittaker(spec, x), 3, sign, g).residual():.2e}")

print(f"scalar system residual:     {scalar_system_residual(spec, h, z).relative:.2e}")
bent = lambda x: VellElement(3, whittaker(spec, x).coeffs * (1 + 1e-3 * np.arange(7)))
print(f"... after a 0.1% bend:      {scalar_system_residual(spec, h, z, phi=bent).relative:.2e}")
