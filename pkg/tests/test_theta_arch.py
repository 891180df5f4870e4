import math
from fractions import Fraction

import numpy as np
import pytest

from quatlift import make_space
from quatlift.field_space import SpaceVector, herm
from quatlift.group_lie import GroupElement, iwasawa, m_of, n_of, random_group_element, z_of
from quatlift.special_quadrature import QuadratureSpec
from quatlift.theta_arch import (ArchSection, arch_constant, arch_integral, eta_parameter, fourier_A, mu_inf,
                                 whittaker_constant)
from quatlift.whittaker_schmid import WhittakerSpec, b_ell, whittaker

# 2 pi^2 Gamma(2l+1) / (4 pi)^(2l+1), evaluated in closed form
ARCH_RATIO = {2: 2 * math.pi ** 2 * 24 / (4 * math.pi) ** 5, 3: 2 * math.pi ** 2 * 720 / (4 * math.pi) ** 7}
# identified from independent quadrature: 2^(l+2) pi^(2l+1)
WHITTAKER_C = {2: 16 * math.pi ** 5, 3: 32 * math.pi ** 7, 4: 64 * math.pi ** 9}

TOL = QuadratureSpec(1e-6, 1e-6, 200, 16.0)


def v0(space, coords):
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return space.rat_to_arch(full)


@pytest.mark.parametrize("ell", [2, 3])
def test_arch_constant(ell):
    assert arch_constant(ell) == pytest.approx(ARCH_RATIO[ell], rel=1e-13)


@pytest.mark.parametrize("n,coords", [(1, [1, 1, 0]), (1, [0, 2, 1]), (2, [1, 1, 0, 0]), (2, [1, 2, 1, 1])])
def test_arch_integral_is_a_multiple_of_B(n, coords):
    space = make_space(n, 1)
    v = SpaceVector.rational(coords, 1)
    t = herm(space, v, v).x
    I = arch_integral(space, v, t, 3)
    B = b_ell(space, v, 3, GroupElement.identity(space))
    assert np.allclose(I.coeffs, ARCH_RATIO[3] * B.coeffs, rtol=1e-9, atol=1e-12 * np.abs(B.coeffs).max())


def test_arch_integral_checks_t():
    space = make_space(1, 1)
    v = SpaceVector.rational([1, 1, 0], 1)
    with pytest.raises(ValueError):
        arch_integral(space, v, 2, 3)
    with pytest.raises(ValueError):
        ArchSection(Fraction(-1), 3, 1)


def test_section_convergence_flag():
    assert ArchSection(1, 3, 1).converges and not ArchSection(1, 2, 1).converges


def test_mu_is_a_character_of_the_torus():
    s = ArchSection(Fraction(1), 3, 1)
    a, b = 0.7 * np.exp(0.3j), 1.4 * np.exp(-1.1j)
    diag = lambda x: np.diag([x, 1 / np.conj(x)])
    assert mu_inf(s, diag(a) @ diag(b)) == pytest.approx(mu_inf(s, diag(b) @ diag(a)))
    with pytest.raises(ValueError):
        mu_inf(s, np.eye(2) * 2)


@pytest.mark.parametrize("ell", [2, 3, 4])
def test_fourier_transform_constant_n1(ell):
    space = make_space(1, 1)
    x = v0(space, [0.5 + 0.3j])
    J = fourier_A(space, x, ell, GroupElement.identity(space), TOL)
    W = whittaker(WhittakerSpec(space, eta_parameter(x), ell), GroupElement.identity(space)).coeffs
    assert J.converged
    assert np.allclose(J.value.coeffs, WHITTAKER_C[ell] * W, rtol=1e-6, atol=1e-6 * np.abs(J.value.coeffs).max())


def test_fourier_transform_constant_n2_general_point(rng):
    space = make_space(2, 1)
    x = v0(space, [0.7, 0.2j])
    c, s = np.cosh(0.3), np.sinh(0.3)
    g = (z_of(space, 0.2) @ n_of(space, v0(space, [0.1, -0.2]))
         @ m_of(space, np.array([[c, s], [s, c]]), 1.1 * np.exp(0.4j))
         @ iwasawa(space, random_group_element(space, rng, 0.5)).k_part)
    J = fourier_A(space, x, 3, g, TOL)
    W = whittaker(WhittakerSpec(space, 1j * x, 3), g).coeffs
    assert np.allclose(J.value.coeffs, whittaker_constant(3) * W, rtol=1e-5,
                       atol=1e-5 * np.abs(J.value.coeffs).max())


def test_fourier_transform_needs_positive_v0():
    space = make_space(2, 1)
    with pytest.raises(ValueError):
        fourier_A(space, v0(space, [0.1, 1.0]), 3, GroupElement.identity(space))
