import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from quatlift import make_space
from quatlift.acceptance import random_positive_T, random_v0_unitary
from quatlift.group_lie import (GroupElement, VellElement, chi_T, eta, exp_elem, is_in_k, is_in_n, iwasawa,
                                iwasawa_identity_residual, m_of, n_coordinates, n_generator, n_of, random_group_element,
                                vell_act, z_of)


def v0(space, coords):
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return space.rat_to_arch(full)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_iwasawa_coordinate_identities(n):
    space = make_space(n, 1)
    for j in (1, 2):
        for k in range(1, n + 1):
            for sign in "+-":
                res, members = iwasawa_identity_residual(space, j, k, sign)
                assert res <= 1e-13 and members


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2 ** 31), st.floats(0.05, 1.5))
def test_iwasawa_reconstruction(n, seed, scale):
    space = make_space(n, 1)
    g = random_group_element(space, np.random.default_rng(seed), scale)
    tr = iwasawa(space, g)
    assert np.allclose(tr.product(space).mat, g.mat, atol=1e-10 * max(1, np.abs(g.mat).max()))
    assert is_in_n(space, tr.n_part) and is_in_k(space, tr.k_part)
    assert tr.z.real > 0 and abs(tr.z.imag) < 1e-12


def test_group_elements_preserve_the_form(space, rng):
    g = random_group_element(space, rng, 1.0)
    assert g.invariant_residual(space) < 1e-12
    assert np.allclose((g @ g.inverse(space)).mat, np.eye(space.dim))


def test_heisenberg_law(space, rng):
    x, y = (v0(space, rng.normal(size=space.n) + 1j * rng.normal(size=space.n)) for _ in range(2))
    prod = n_of(space, x) @ n_of(space, y)
    xs, s = n_coordinates(space, prod)
    assert np.allclose(xs, x + y)
    # the commutator lands in the centre
    comm = prod @ (n_of(space, y) @ n_of(space, x)).inverse(space)
    cx, cs = n_coordinates(space, comm)
    assert np.allclose(cx, 0, atol=1e-12)
    roundtrip = z_of(space, s) @ n_of(space, xs)
    assert np.allclose(roundtrip.mat, prod.mat)


def test_characters_are_homomorphisms_trivial_on_the_centre(space, rng):
    T = random_positive_T(space, rng)
    x, y = (v0(space, rng.normal(size=space.n) + 1j * rng.normal(size=space.n)) for _ in range(2))
    a, b = n_of(space, x), z_of(space, 0.7) @ n_of(space, y)
    assert chi_T(space, T, a @ b) == pytest.approx(chi_T(space, T, a) * chi_T(space, T, b))
    assert chi_T(space, T, z_of(space, 1.3)) == pytest.approx(1)
    # eta_{v0} is chi_{i v0}
    assert eta(space, T, a) == pytest.approx(chi_T(space, 1j * T, a))


def test_m_normalises_n(space, rng):
    h = random_v0_unitary(space.n, rng)
    m = m_of(space, h, 0.8 * np.exp(0.4j))
    n = n_of(space, v0(space, rng.normal(size=space.n)))
    assert is_in_n(space, m.inverse(space) @ n @ m)


def test_m_rejects_non_unitary_h():
    space = make_space(2, 1)
    with pytest.raises(ValueError):
        m_of(space, np.array([[2.0, 0], [0, 1]]), 1.0)


def test_exp_of_nilpotent_is_polynomial(space, rng):
    x = v0(space, rng.normal(size=space.n))
    X = n_generator(space, x)
    assert np.allclose(exp_elem(X).mat, scipy.linalg.expm(X))


def test_vell_is_a_unitary_right_action(rng):
    space = make_space(2, 1)
    ks = [iwasawa(space, random_group_element(space, rng, 0.8)).k_part for _ in range(2)]
    c = VellElement(3, rng.normal(size=7) + 1j * rng.normal(size=7))
    lhs = vell_act(ks[0] @ ks[1], 3, c)
    rhs = vell_act(ks[1], 3, vell_act(ks[0], 3, c))
    assert np.allclose(lhs.coeffs, rhs.coeffs)
    assert vell_act(ks[0], 3, c).norm() == pytest.approx(c.norm())
    assert np.allclose(vell_act(GroupElement.identity(space), 3, c).coeffs, c.coeffs)


def test_vell_act_rejects_non_k(rng):
    space = make_space(1, 1)
    with pytest.raises(ValueError):
        vell_act(random_group_element(space, rng, 1.0), 2, VellElement.zero(2))
