"""Integrate A_l along the centre coset and read off the proportionality constant with W.

The same constant comes out for every v0 and every group point; it matches
2^(l+2) pi^(2l+1).
"""
import numpy as np

from quatlift import make_space
from quatlift.group_lie import GroupElement, m_of, n_of, z_of
from quatlift.theta_arch import fourier_A, whittaker_constant
from quatlift.whittaker_schmid import WhittakerSpec, whittaker

space = make_space(1, 1)
ell = 3
points = {"identity": GroupElement.identity(space),
          "torus": m_of(space, np.eye(1) * np.exp(0.7j), 0.8 * np.exp(0.5j)),
          "n m": z_of(space, 0.3) @ n_of(space, space.rat_to_arch(np.array([0, 0.2 - 0.1j, 0])))
          @ m_of(space, np.eye(1), 1.2)}

print(f"closed form: {whittaker_constant(ell):.10g}")
for a in (0.6, 0.3j, 1.0 + 0.4j):
    v0 = space.rat_to_arch(np.array([0, a, 0]))
    for name, g in points.items():
        J = fourier_A(space, v0, ell, g)
        W = whittaker(WhittakerSpec(space, 1j * v0, ell), g).coeffs
        i = int(np.argmax(np.abs(W)))
        C = J.value.coeffs[i] / W[i]
        dev = np.max(np.abs(J.value.coeffs - C * W)) / np.max(np.abs(J.value.coeffs))
        print(f"v0 = {a!s:>9}  g = {name:8s}  C = {C.real:.10g}  deviation {dev:.1e}")
