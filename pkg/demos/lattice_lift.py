"""Truncated lattice lift on U(2,1) over Q(i): convergence in R and its first Fourier coefficients.

Coefficients at T = 1, i, -1, -i line up with one multiple of W_{iT}; the
constant term shrinks as R grows.
"""
import numpy as np

from quatlift import make_space
from quatlift.group_lie import m_of
from quatlift.lattice_lift import LatticeSpec, TorusGrid, lift_fourier_coeff, poincare_lift
from quatlift.whittaker_schmid import WhittakerSpec, whittaker

space = make_space(1, 1)
lattice = LatticeSpec.standard(space)
g = m_of(space, np.eye(1) * np.exp(0.3j), 0.8 * np.exp(0.2j))

prev = None
for R in (10, 20, 40, 80):
    L = poincare_lift(space, lattice, 1, 3, g, R)
    diff = "" if prev is None else f"  |L(R) - L(R/2)| = {(L.value - prev).norm():.3e}"
    print(f"R = {R:3d}  terms {L.terms:6d}  |L| = {L.value.norm():.6f}  tail bound {L.tail:.1f}{diff}")
    prev = L.value

labels = {"1": 1, "i": 1j, "-1": -1, "-i": -1j, "0": 0}
Ts = [space.rat_to_arch(np.array([0, c, 0])) for c in labels.values()]
coef = lift_fourier_coeff(space, lattice, 1, 3, Ts, g, 24.0, TorusGrid(6, 6))
for name, T, a in list(zip(labels, Ts, coef))[:4]:
    W = whittaker(WhittakerSpec(space, 1j * T, 3), g).coeffs
    k = int(np.argmax(np.abs(W)))
    print(f"T = {name:>2}:  a(T)/W = {(a[k] / W[k]).real:.1f}")
print(f"T =  0:  max |a(0)| = {np.abs(coef[4]).max():.3f}")
