from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quatlift.field_space import (FieldElement, SpaceVector, deltabar, herm, majorant, make_space, pr2, prn,
                                  to_arch)
from quatlift.lattice_lift import LatticeSpec, majorant_gram

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
ds = st.sampled_from([1, 2, 3, 5, 7, 11])


@st.composite
def elems(draw, d=None):
    d = d if d is not None else draw(ds)
    return FieldElement(draw(fracs), draw(fracs), d)


@given(ds.flatmap(lambda d: st.tuples(elems(d), elems(d), elems(d))))
def test_ring_axioms(triple):
    a, b, c = triple
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(ds.flatmap(lambda d: st.tuples(elems(d), elems(d))))
def test_norm_is_multiplicative_and_conj_is_involution(pair):
    a, b = pair
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@given(elems())
def test_inverse(a):
    if a.norm() == 0:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == FieldElement(1, 0, a.d)


@given(elems())
def test_complex_embedding_is_a_homomorphism(a):
    b = FieldElement(Fraction(1, 3), 2, a.d)
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))


def test_field_mismatch():
    with pytest.raises(ValueError):
        FieldElement(1, 1, 1) + FieldElement(1, 1, 2)


@pytest.mark.parametrize("d", [4, 0, -1, 12])
def test_rejects_non_squarefree(d):
    with pytest.raises(ValueError):
        make_space(1, d)


def test_str_forms():
    assert str(FieldElement(1, -1, 1)) == "1-sqrt(-1)"
    assert str(FieldElement(0, Fraction(1, 2), 3)) == "1/2*sqrt(-3)"
    assert str(FieldElement(Fraction(-2, 3), 0, 2)) == "-2/3"


def test_rational_gram(space):
    n = space.n
    b = [SpaceVector.rational([1 if j == i else 0 for j in range(space.dim)], 1) for i in range(space.dim)]
    assert herm(space, b[0], b[-1]) == 1
    assert herm(space, b[0], b[0]) == 0 and herm(space, b[-1], b[-1]) == 0
    assert herm(space, b[1], b[1]) == 1
    for k in range(2, n + 1):
        assert herm(space, b[k], b[k]) == -1


def test_arch_and_rational_forms_agree(space, rng):
    for _ in range(10):
        c = rng.integers(-3, 4, size=(2, space.dim))
        v = SpaceVector.rational([int(x) for x in c[0]], 1)
        w = SpaceVector.rational([FieldElement(int(x), int(y), 1) for x, y in zip(c[1], c[0])], 1)
        exact = herm(space, v, w)
        assert isinstance(exact, FieldElement)
        assert complex(exact) == pytest.approx(herm(space, to_arch(space, v), to_arch(space, w)), abs=1e-12)


def test_round_trip(space, rng):
    v = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    assert np.allclose(space.arch_to_rat(space.rat_to_arch(v)), v)


def test_majorant_splits_into_projections(space, rng):
    v = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    p, q = pr2(space, v), prn(space, v)
    assert np.allclose(p + q, v)
    assert herm(space, v, v).real == pytest.approx(np.sum(abs(p) ** 2) - np.sum(abs(q) ** 2))
    assert majorant(space, v, v).real == pytest.approx(np.sum(abs(v) ** 2))
    db = deltabar(space, v)
    assert abs(herm(space, p, db)) < 1e-12


def test_standard_lattice_majorant_is_identity():
    space = make_space(1, 1)
    G = majorant_gram(space, LatticeSpec.standard(space))
    assert np.allclose(G, np.eye(len(G)))
