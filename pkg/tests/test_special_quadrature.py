import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quatlift.special_quadrature import (QuadratureSpec, bessel_k, bessel_k_array, bessel_k_scaled, quad_1d,
                                         quad_2d_complex, radial_gamma, radial_gamma_quadrature)

# mpmath.besselk at 30 digits, frozen
FROZEN = [
    (0, 0.1, 2.4270690247020164),
    (1, 0.5, 1.656441120003301),
    (3, 2.0, 0.6473853909486341),
    (5, 7.5, 0.0011491630148312388),
    (8, 30.0, 6.056581782413186e-14),
    (2, 0.001, 1999999.5000009716),
    (4, 60.0, 1.6137249034821196e-27),
]


@pytest.mark.parametrize("v,x,expected", FROZEN)
def test_frozen_values(v, x, expected):
    assert bessel_k(v, x) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.floats(0.05, 80.0))
def test_agrees_with_mpmath(v, x):
    ref = float(mpmath.besselk(v, x))
    assert abs(bessel_k(v, x) - ref) <= 1e-11 * ref


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.floats(0.1, 40.0))
def test_three_term_recurrence(v, x):
    k = bessel_k_array([v - 1, v, v + 1], x)
    assert k[2] == pytest.approx(k[0] + 2 * v / x * k[1], rel=1e-12)


def test_negative_order_symmetry():
    assert np.allclose(bessel_k_array([-3, 3], 1.7), bessel_k(3, 1.7), rtol=1e-15)


def test_scaled_form_survives_large_argument():
    x = 900.0
    ref = float(mpmath.besselk(2, x) * mpmath.exp(x))
    assert bessel_k_scaled(2, x) == pytest.approx(ref, rel=1e-12)


def test_monotone_in_x_and_order():
    xs = np.linspace(0.2, 12, 40)
    for v in range(5):
        vals = [bessel_k(v, x) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(bessel_k(v, 2.0) < bessel_k(v + 1, 2.0) for v in range(8))


def test_bad_argument():
    with pytest.raises(ValueError):
        bessel_k(1, 0.0)


def test_quad_1d_vector_valued():
    res = quad_1d(lambda x: np.array([math.exp(-x), x * math.exp(-x)]), 0.0, 50.0)
    assert np.allclose(res.value, [1.0, 1.0], atol=1e-10)


def test_quad_2d_gaussian():
    res = quad_2d_complex(lambda z: np.exp(-np.abs(z) ** 2)[:, None] * np.ones((1, 2)), radius=10.0)
    assert np.allclose(res.value, math.pi, rtol=1e-9)


@pytest.mark.parametrize("ell", [0, 2, 3, 5])
def test_radial_gamma_closed_form_matches_quadrature(ell):
    c = 4 * math.pi
    assert radial_gamma_quadrature(ell, c).value == pytest.approx(radial_gamma(ell, c), rel=1e-9)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0)
