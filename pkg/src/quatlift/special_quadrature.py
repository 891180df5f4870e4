"""Modified Bessel functions of integer order, quadrature helpers and the radial Gaussian integral."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

EULER_GAMMA = 0.57721566490153286061
MAX_ORDER = 64
SERIES_MAX_X = 2.0
ASYMPTOTIC_MIN_X = 25.0
UNDERFLOW_X = 700.0


class BesselUnderflowWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    truncation_radius: float = 40.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.truncation_radius <= 0:
            raise ValueError("truncation radius must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass
class QuadResult:
    value: object
    error: float
    converged: bool


# -- K_0 and K_1 in three regimes --

def _k01_series(x: float):
    """Ascending series; ``q^k/(k!)^2`` and ``H_k`` are carried along."""
    q = x * x / 4.0
    log_term = math.log(x / 2.0)
    i0 = i1 = s0 = s1 = 0.0
    term = 1.0
    harmonic = 0.0
    k = 0
    while True:
        i0 += term
        i1 += term / (k + 1) * (x / 2.0)
        s0 += term * harmonic
        # psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += term / (k + 1) * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA)
        k += 1
        harmonic += 1.0 / k
        term *= q / (k * k)
        if k > 2 and term < 1e-18 * i0:
            break
    k0 = -(log_term + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_term * i1 - (x / 4.0) * s1
    return k0, k1


def _k01_scaled_quadrature(x: float, orders=(0, 1)):
    """Trapezoid rule on ``int_0^inf exp(-x(cosh u - 1)) cosh(v u) du`` (spectrally accurate)."""
    u_max = math.acosh(1.0 + 45.0 / x) + 0.5
    h = 0.05
    u = np.arange(0.0, u_max + h, h)
    base = np.exp(-x * (np.cosh(u) - 1.0))
    out = []
    for v in orders:
        f = base * np.cosh(v * u)
        out.append(h * (0.5 * f[0] + np.sum(f[1:])))
    return tuple(out)


def _k_scaled_asymptotic(v: int, x: float) -> float:
    mu = 4.0 * v * v
    total = 1.0
    term = 1.0
    k = 1
    while True:
        nxt = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) > abs(term) or nxt == 0.0:
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        k += 1
    return math.sqrt(math.pi / (2.0 * x)) * total


def _k01_scaled(x: float):
    if x <= SERIES_MAX_X:
        k0, k1 = _k01_series(x)
        e = math.exp(x)
        return k0 * e, k1 * e
    if x < ASYMPTOTIC_MIN_X:
        return _k01_scaled_quadrature(x)
    return _k_scaled_asymptotic(0, x), _k_scaled_asymptotic(1, x)


def bessel_k_scaled(v: int, x: float) -> float:
    """``exp(x) K_v(x)`` for integer ``v``; never underflows."""
    if int(v) != v:
        raise ValueError("only integer orders are supported")
    v = abs(int(v))
    if v > MAX_ORDER:
        raise ValueError(f"|v| must be <= {MAX_ORDER}")
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    k0, k1 = _k01_scaled(x)
    if v == 0:
        return k0
    prev, cur = k0, k1
    for m in range(1, v):
        prev, cur = cur, prev + (2.0 * m / x) * cur
    return cur


def bessel_k(v: int, x: float) -> float:
    """Standard modified Bessel function ``K_v(x)`` for integer ``v`` and ``x > 0``."""
    scaled = bessel_k_scaled(v, x)
    if x > UNDERFLOW_X:
        warnings.warn(f"K_{v}({x}) underflows double precision; returning 0", BesselUnderflowWarning)
        return 0.0
    return scaled * math.exp(-x)


def bessel_k_array(orders, x: float) -> np.ndarray:
    """``K_v(x)`` for each ``v`` in ``orders`` from one recurrence pass."""
    orders = np.asarray(orders, dtype=int)
    top = int(np.max(np.abs(orders)))
    if top > MAX_ORDER:
        raise ValueError(f"|v| must be <= {MAX_ORDER}")
    if not x > 0:
        raise ValueError("x must be positive")
    k0, k1 = _k01_scaled(float(x))
    table = [k0, k1]
    for m in range(1, top):
        table.append(table[m - 1] + (2.0 * m / x) * table[m])
    scale = math.exp(-x) if x <= UNDERFLOW_X else 0.0
    return np.array([table[abs(v)] for v in orders]) * scale


# -- quadrature --

def _as_array(val):
    from .group_lie import VellElement
    if isinstance(val, VellElement):
        return val.coeffs, val.ell
    return np.asarray(val), None


def quad_1d(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of a scalar, array or VellElement valued ``f``."""
    from .group_lie import VellElement
    probe, ell = _as_array(f(a if np.isfinite(a) else (b - 1.0 if np.isfinite(b) else 0.0)))

    def g(x):
        return _as_array(f(x))[0]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        val, err, info = scipy.integrate.quad_vec(
            g, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=True)
    converged = bool(info.success)
    if ell is not None:
        val = VellElement(ell, val)
    elif np.ndim(val) == 0:
        val = complex(val) if np.iscomplexobj(probe) else float(val)
    return QuadResult(val, float(err), converged)


def _angular_trapezoid(f, r: float, tol: float, max_points: int = 1 << 16):
    """Periodic trapezoid rule in the angle, doubling until two levels agree."""
    m = 16
    prev = None
    while True:
        theta = 2 * np.pi * np.arange(m) / m
        vals = np.asarray(f(r * np.exp(1j * theta)))
        est = vals.mean(axis=0) * 2 * np.pi
        if prev is not None:
            diff = np.max(np.abs(est - prev))
            if diff <= tol * max(1.0, np.max(np.abs(est))) or m >= max_points:
                return est, diff
        prev = est
        m *= 2


def quad_2d_complex(f, spec: QuadratureSpec = QuadratureSpec(), radius=None) -> QuadResult:
    """``int_{|z| < R} f(z) dx dy`` in polar coordinates.

    ``f`` must accept a 1-D complex array and return an array whose first axis
    runs over the sample points.  The angle uses the periodic trapezoid rule,
    the radius adaptive Gauss-Kronrod; both share the tolerance budget.
    """
    R = spec.truncation_radius if radius is None else float(radius)
    inner_tol = 0.1 * spec.rel_tol

    def radial(r):
        est, _ = _angular_trapezoid(f, r, inner_tol)
        return est * r

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        val, err, info = scipy.integrate.quad_vec(
            radial, 0.0, R, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=True)
    if np.ndim(val) == 0:
        val = complex(val)
    return QuadResult(val, float(err), bool(info.success))


def radial_gamma(ell: int, c: float) -> float:
    """``int_{C^x} |a|^{4l+2} exp(-c|a|^2) d^x a`` with ``d^x a = dx dy / |a|^2``."""
    if not c > 0:
        raise ValueError("c must be positive")
    return math.exp(math.log(math.pi) + math.lgamma(2 * ell + 1) - (2 * ell + 1) * math.log(c))


def radial_gamma_quadrature(ell: int, c: float, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """The same integral by 2-D quadrature, for cross-checking the closed form."""
    if not c > 0:
        raise ValueError("c must be positive")
    radius = math.sqrt((2 * ell + 1 + 60.0) / c) * 1.5

    def integrand(z):
        r2 = np.abs(z) ** 2
        return r2 ** (2 * ell) * np.exp(-c * r2)

    return quad_2d_complex(integrand, spec, radius=radius)
