import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quatlift import make_space
from quatlift.field_space import FieldElement, herm
from quatlift.group_lie import GroupElement, m_of, n_of, z_of
from quatlift.lattice_lift import (CyclotomicNumber, FinitePartProvider, LatticeSpec, TorusGrid,
                                   algebraic_coeff, bf_table_from_json, brute_force_norm, cyclotomic_polynomial,
                                   enumerate_norm, fincke_pohst, indicator_provider, lift_fourier_coeff,
                                   lift_schmid_check, poincare_lift, shortest_length, unipotent_periods)


def v0(space, coords):
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return space.rat_to_arch(full)


# -- enumeration --

@settings(max_examples=30, deadline=None)
@given(st.sampled_from([1, 2, 3, 5, 7]), st.sampled_from([Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2),
                                                           Fraction(0), Fraction(-1), Fraction(-3)]),
       st.floats(1.0, 6.0))
def test_enumeration_matches_box_oracle(d, t, R):
    space = make_space(1, d)
    lattice = LatticeSpec.standard(space)
    oracle = brute_force_norm(space, lattice, t, R)
    fast = enumerate_norm(space, lattice, t, R)
    assert fast.complete
    assert np.array_equal(fast.coords, oracle.coords)


def test_enumeration_n2_and_custom_basis():
    space = make_space(2, 1)
    for lattice in (LatticeSpec.standard(space),
                    LatticeSpec(((1, 0, 0, 0), (0, FieldElement(1, 1, 1), 0, 0), (0, 0, 1, 0), (0, 0, 0, 2)), 1)):
        for t in (1, -1, 0):
            fast = enumerate_norm(space, lattice, t, 3.0)
            assert np.array_equal(fast.coords, brute_force_norm(space, lattice, t, 3.0).coords)


def test_enumerated_norms_are_exact():
    space = make_space(1, 3)
    lattice = LatticeSpec.standard(space)
    en = enumerate_norm(space, lattice, 2, 8.0)
    assert len(en) > 0
    for v in en.space_vectors(space, lattice):
        assert herm(space, v, v) == FieldElement(2, 0, 3)


def test_enumeration_is_symmetric_and_bounded():
    space = make_space(1, 1)
    lattice = LatticeSpec.standard(space)
    en = enumerate_norm(space, lattice, 1, 10.0)
    keys = {tuple(c) for c in en.coords}
    assert all(tuple(-c) in keys for c in en.coords)
    assert np.all(np.sum(np.abs(en.vectors) ** 2, axis=1) <= 10.0 + 1e-9)


def test_fincke_pohst_counts_points_of_Z2():
    pts, complete = fincke_pohst(np.eye(2), 2.0)
    assert complete and len(pts) == 9


def test_shortest_length_standard():
    space = make_space(1, 1)
    assert shortest_length(space, LatticeSpec.standard(space)) == pytest.approx(1.0)


def test_degenerate_basis_rejected():
    with pytest.raises(ValueError):
        LatticeSpec(((1, 0, 0), (1, 0, 0), (0, 0, 1)), 1)


# -- lift --

@pytest.fixture(scope="module")
def lift_setup():
    space = make_space(1, 1)
    return space, LatticeSpec.standard(space)


def test_lift_hypotheses(lift_setup):
    space, lattice = lift_setup
    with pytest.raises(ValueError):
        poincare_lift(space, lattice, 1, 2, GroupElement.identity(space), 10.0)
    with pytest.raises(ValueError):
        poincare_lift(space, lattice, -1, 3, GroupElement.identity(space), 10.0)


def test_lift_is_left_invariant_under_integral_unipotents(lift_setup):
    space, lattice = lift_setup
    basis, centre = unipotent_periods(space, lattice)
    g = m_of(space, np.eye(1) * np.exp(0.3j), 0.9 * np.exp(0.2j))
    base = poincare_lift(space, lattice, 1, 3, g, 20.0).value
    for x0 in basis:
        shifted = n_of(space, v0(space, x0)) @ g
        assert np.allclose(poincare_lift(space, lattice, 1, 3, shifted, 20.0).value.coeffs, base.coeffs,
                           atol=1e-12 * base.norm())
    zc = z_of(space, centre) @ g
    assert np.allclose(poincare_lift(space, lattice, 1, 3, zc, 20.0).value.coeffs, base.coeffs,
                       atol=1e-12 * base.norm())


def test_unipotent_periods_standard_gaussian():
    space = make_space(1, 1)
    basis, centre = unipotent_periods(space, LatticeSpec.standard(space))
    assert centre == 1.0
    # (1+i) Z[i]: all norms even
    assert sorted(int(round(abs(b[0]) ** 2)) for b in basis) == [2, 4]


def test_lift_cauchy_and_schmid(lift_setup):
    space, lattice = lift_setup
    g = GroupElement.identity(space)
    a, b = poincare_lift(space, lattice, 1, 3, g, 10.0), poincare_lift(space, lattice, 1, 3, g, 20.0)
    assert (a.value - b.value).norm() <= a.tail
    chk = lift_schmid_check(space, lattice, 1, 3, g, 10.0, "+")
    assert chk["residual"] <= chk["per_term"] + chk["tail"]


def test_fourier_extraction_defaults_to_n1():
    space = make_space(2, 1)
    with pytest.raises(ValueError):
        lift_fourier_coeff(space, LatticeSpec.standard(space), 1, 4, [v0(space, [1, 0])],
                           GroupElement.identity(space), 4.0)


def test_fourier_extraction_n1_shape(lift_setup):
    space, lattice = lift_setup
    g = m_of(space, np.eye(1) * np.exp(0.3j), 0.8 * np.exp(0.2j))
    out = lift_fourier_coeff(space, lattice, 1, 3, [v0(space, [1]), v0(space, [0])], g, 12.0, TorusGrid(4, 4))
    assert out.shape == (2, 7)
    assert np.abs(out[0]).max() > 10 * np.abs(out[1]).max()


# -- cyclotomic arithmetic --

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(8) == [1, 0, 0, 0, 1]
    assert cyclotomic_polynomial(3) == [1, 1, 1]
    assert len(cyclotomic_polynomial(12)) == 5


cyc = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=0, max_size=6)


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5, 8, 12]), cyc, cyc, cyc)
def test_cyclotomic_field_axioms(N, a, b, c):
    x, y, z = (CyclotomicNumber(N, u) for u in (a, b, c))
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y).conj() == x.conj() * y.conj()
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), abs=1e-9)
    assert CyclotomicNumber.from_json(N, json.loads(json.dumps((x * y).to_json()))) == x * y


def test_roots_of_unity():
    z = CyclotomicNumber.zeta(8)
    assert z * z * z * z == CyclotomicNumber.rational(8, -1)
    assert z * z.conj() == CyclotomicNumber.rational(8, 1)
    assert CyclotomicNumber.zeta(8, 8) == CyclotomicNumber.rational(8, 1)


def test_algebraic_coefficient_combination():
    table = bf_table_from_json({"1": ["3"], "2": ["-5/2"]}, 8)
    z = CyclotomicNumber.zeta(8)
    prov = FinitePartProvider(lambda T, lat: [(1, z), (2, -z)])
    assert algebraic_coeff(table, None, prov) == z * Fraction(11, 2)


def test_indicator_provider():
    space = make_space(1, 1)
    table = {Fraction(1): CyclotomicNumber.rational(8, 4)}
    ind = indicator_provider(space, 8)
    T = [FieldElement(0, 0, 1), FieldElement(0, 1, 1), FieldElement(0, 0, 1)]
    assert algebraic_coeff(table, T, ind) == CyclotomicNumber.rational(8, 4)
    half = [FieldElement(0, 0, 1), FieldElement(Fraction(1, 2), 0, 1), FieldElement(0, 0, 1)]
    assert algebraic_coeff(table, half, ind).is_zero()


def test_provider_limits():
    big = FinitePartProvider(lambda T, lat: [(1, 1)] * 20, max_support=10)
    with pytest.raises(ValueError):
        big(None, None)
    with pytest.raises(ValueError):
        algebraic_coeff({}, None, big)
