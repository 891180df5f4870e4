import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quatlift import make_space
from quatlift.acceptance import random_m_point, random_positive_T, random_positive_vector
from quatlift.group_lie import (GroupElement, VellElement, chi_T, iwasawa, m_of, n_of, random_group_element,
                                vell_act, z_of)
from quatlift.whittaker_schmid import (SingularLocusError, WhittakerSpec, a_ell, b_ell,
                                       contraction_identity_residual, ftv_residual, isotropic_growth,
                                       scalar_system_residual, schmid_apply, whittaker, whittaker_on_M)

# mpmath.besselk(|v|, 0.21 * 4 pi / sqrt 2), frozen
K_AT_BETA = [0.13439775781553612, 0.16708179804604076, 0.313476887474723, 0.8390540755023224]


def T_of(space, coords):
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return space.rat_to_arch(full)


def test_closed_form_on_the_torus():
    space = make_space(1, 1)
    spec = WhittakerSpec(space, T_of(space, [0.3]), 3)
    W = whittaker_on_M(spec, np.eye(1), 0.7).coeffs
    expected = 0.7 ** 8 * np.array([K_AT_BETA[abs(v)] for v in range(-3, 4)])
    assert np.allclose(W, expected, rtol=1e-12, atol=0)


def test_equivariance_under_n_and_k(rng):
    space = make_space(2, 1)
    spec = WhittakerSpec(space, random_positive_T(space, rng), 3)
    g = random_group_element(space, rng, 0.6)
    n = z_of(space, 0.4) @ n_of(space, T_of(space, rng.normal(size=2)))
    k = iwasawa(space, random_group_element(space, rng, 0.6)).k_part
    assert np.allclose(whittaker(spec, n @ g).coeffs, chi_T(space, spec.T, n) * whittaker(spec, g).coeffs)
    assert np.allclose(whittaker(spec, g @ k).coeffs, vell_act(k, 3, whittaker(spec, g)).coeffs)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2 ** 31))
def test_scalar_system(n, ell, seed):
    space = make_space(n, 1)
    rng = np.random.default_rng(seed)
    spec = WhittakerSpec(space, random_positive_T(space, rng, rng.uniform(0.2, 1.0)), ell)
    h, z = random_m_point(space, rng)
    assert scalar_system_residual(spec, h, z).relative < 1e-6


def test_scalar_system_detects_a_perturbed_function(rng):
    space = make_space(1, 1)
    spec = WhittakerSpec(space, T_of(space, [0.5]), 3)
    bent = lambda g: VellElement(3, whittaker(spec, g).coeffs * (1 + 1e-2 * np.arange(7)))
    assert scalar_system_residual(spec, np.eye(1), 1.1, phi=bent).relative > 1e-3


@pytest.mark.parametrize("n,ell", [(1, 2), (2, 3), (3, 2)])
def test_schmid_kills_whittaker(n, ell, rng):
    space = make_space(n, 1)
    spec = WhittakerSpec(space, random_positive_T(space, rng), ell)
    h, z = random_m_point(space, rng)
    for sign in "+-":
        out = schmid_apply(space, lambda g: whittaker(spec, g), ell, sign, m_of(space, h, z))
        assert out.residual() < 1e-5


def test_ftv_equations(rng):
    space = make_space(2, 1)
    spec = WhittakerSpec(space, random_positive_T(space, rng), 3)
    h, z = random_m_point(space, rng)
    res = ftv_residual(spec, h, z)
    assert res["first_order"] < 1e-8 and res["bessel"] < 1e-5


def test_negative_norm_whittaker_vanishes():
    space = make_space(2, 1)
    spec = WhittakerSpec(space, T_of(space, [0.2, 1.0]), 3)
    assert spec.norm_type == -1
    assert whittaker(spec, GroupElement.identity(space)).norm() == 0


def test_isotropic_growth_is_reported():
    space = make_space(2, 1)
    spec = WhittakerSpec(space, T_of(space, [1.0, 1.0]), 3)
    assert spec.norm_type == 0
    out = isotropic_growth(spec, [np.array([[np.cosh(s), np.sinh(s)], [np.sinh(s), np.cosh(s)]]) for s in (0, 1, 2)])
    assert len(out) == 3


def test_T_must_be_in_v0():
    space = make_space(1, 1)
    with pytest.raises(ValueError):
        WhittakerSpec(space, space.b1, 2)


@pytest.mark.parametrize("n,ell", [(1, 2), (2, 2), (2, 4), (3, 3)])
def test_schmid_kills_B(n, ell, rng):
    space = make_space(n, 1)
    v = random_positive_vector(space, rng)
    g = random_group_element(space, rng, 0.5)
    for sign in "+-":
        assert schmid_apply(space, lambda h: b_ell(space, v, ell, h), ell, sign, g).residual() < 1e-5


def test_contraction_identities_and_control(rng):
    for n in (1, 2, 3):
        space = make_space(n, 1)
        v = random_positive_vector(space, rng)
        g = random_group_element(space, rng, 0.5)
        for j in range(1, n + 1):
            assert contraction_identity_residual(space, v, g, 3, j) < 1e-10
            assert contraction_identity_residual(space, v, g, 3, j, coef=15) > 1e-3


def test_A_is_homogeneous_of_negative_degree(rng):
    space = make_space(1, 1)
    v = random_positive_vector(space, rng)
    ell = 3
    # Q_l has degree 2l, denominator degree 4l+2
    assert np.allclose(a_ell(space, 2 * v, ell).coeffs, 2.0 ** (-2 * ell - 2) * a_ell(space, v, ell).coeffs)


def test_singular_locus():
    space = make_space(1, 1)
    with pytest.raises(SingularLocusError):
        a_ell(space, space.v(1), 2)
