"""Archimedean theta data, the local lift integral and the Fourier transform of A_l."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field_space import HermitianSpace, herm, majorant_norm, to_arch
from .group_lie import GroupElement, VellElement
from .special_quadrature import QuadratureSpec, quad_2d_complex, radial_gamma
from .whittaker_schmid import PR2_EPS, SingularLocusError, q_ell


@dataclass(frozen=True)
class ArchSection:
    t: Fraction
    ell: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 0:
            raise ValueError("t must be positive")

    @property
    def N(self) -> int:
        return 2 * self.ell + 2 - self.n

    @property
    def converges(self) -> bool:
        return self.ell > self.n + 1


def phi_inf(space: HermitianSpace, v, ell: int) -> VellElement:
    """``Q_l(v) exp(-2 pi ||v||^2)``."""
    return q_ell(space, v, ell) * math.exp(-2 * math.pi * majorant_norm(space, v) ** 2)


def _check_u11(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    form = np.array([[0, 1], [-1, 0]], dtype=complex)
    if h.shape != (2, 2) or np.max(np.abs(h @ form @ h.conj().T - form)) > 1e-10:
        raise ValueError("matrix is not in U(1,1)")
    return h


def mu_inf(section: ArchSection, h) -> complex:
    """``conj(det(h)^{l+2} j(h, i)^{-N} exp(2 pi i t (h . i)))``."""
    h = _check_u11(h)
    a, b, c, d = h[0, 0], h[0, 1], h[1, 0], h[1, 1]
    j = c * 1j + d
    tau = (a * 1j + b) / j
    t = float(section.t)
    val = np.linalg.det(h) ** (section.ell + 2) * j ** (-section.N) * np.exp(2j * np.pi * t * tau)
    return complex(np.conj(val))


def torus_element(a: complex) -> np.ndarray:
    return np.diag([complex(a), 1 / np.conj(complex(a))])


def omega_torus(space: HermitianSpace, a: complex, v, ell: int) -> VellElement:
    """Weil action of ``diag(a, conj(a)^-1)`` on ``phi_inf`` evaluated at ``v``."""
    a = complex(a)
    n = space.n
    r2 = abs(a) ** 2
    factor = (a / abs(a)) ** (n + 2) * r2 ** ((2 + n) / 2) * r2 ** ell
    return q_ell(space, v, ell) * (factor * math.exp(-2 * math.pi * r2 * majorant_norm(space, v) ** 2))


def arch_integrand(space: HermitianSpace, v, t, ell: int, a: complex) -> VellElement:
    """``2 pi delta^{-1}(m) mu_{-t}(m) omega(m) phi(v)`` at ``m = diag(a, conj(a)^-1)``."""
    section = ArchSection(t, ell, space.n)
    mu = mu_inf(section, torus_element(a))
    return omega_torus(space, a, v, ell) * (2 * math.pi * mu / abs(a) ** 2)


def arch_integral(space: HermitianSpace, v, t, ell: int,
                  spec: QuadratureSpec = QuadratureSpec(1e-14, 1e-12)) -> VellElement:
    """Local lift integral over the torus of U(1,1) with ``d^x a = dx dy / |a|^2``.

    Two-dimensional polar quadrature; the section and the Weil action are
    evaluated at every sample point, nothing about their phases is assumed.
    """
    tt = herm(space, v, v)
    tval = complex(tt).real
    if hasattr(tt, "x"):
        if tt != Fraction(t):
            raise ValueError("<v, v> must equal t")
    elif abs(tval - float(Fraction(t))) > 1e-9 * max(1.0, abs(tval)):
        raise ValueError("<v, v> must equal t")
    if tval <= 0:
        raise ValueError("<v, v> must be positive")
    section = ArchSection(t, ell, space.n)
    q = q_ell(space, v, ell).coeffs
    norm2 = majorant_norm(space, v) ** 2
    n = space.n

    def f(zs):
        out = np.zeros((len(zs), 2 * ell + 1), dtype=complex)
        for i, a in enumerate(zs):
            r2 = abs(a) ** 2
            if r2 == 0.0:
                continue
            weil = a ** (n + 2) * r2 ** ell * math.exp(-2 * math.pi * r2 * norm2)
            out[i] = (2 * math.pi * mu_inf(section, torus_element(a)) * weil / r2 ** 2) * q
        return out

    c = 2 * math.pi * (tval + norm2)
    r_max = math.sqrt((2 * ell + 1 + 80.0) / c) * 1.5
    res = quad_2d_complex(f, spec, radius=r_max)
    return VellElement(ell, np.asarray(res.value))


def arch_constant(ell: int) -> float:
    """``2 pi * radial_gamma(l, 4 pi)``, the ratio of the local integral to ``B_{l,v}(1)``."""
    return 2 * math.pi * radial_gamma(ell, 4 * math.pi)


# -- Fourier transform of A_l over the b1 line --

def _q_many(alpha: np.ndarray, beta: np.ndarray, ell: int) -> np.ndarray:
    """Vectorized ``Q_l`` factorial-basis coefficients, shape (K, 2l+1)."""
    from math import comb, factorial
    K = alpha.shape[0]
    first = np.zeros((K, ell + 1), dtype=complex)
    second = np.zeros((K, ell + 1), dtype=complex)
    cb, ca = np.conj(beta), -np.conj(alpha)
    for a in range(ell + 1):
        first[:, a] = comb(ell, a) * alpha ** a * beta ** (ell - a)
        second[:, a] = comb(ell, a) * cb ** a * ca ** (ell - a)
    mono = np.zeros((K, 2 * ell + 1), dtype=complex)
    for a in range(ell + 1):
        mono[:, a:a + ell + 1] += first[:, a:a + 1] * second
    # monomial index a (u1 exponent) -> v = l - a ; coefficient times a! (2l-a)!
    fact = np.array([factorial(a) * factorial(2 * ell - a) for a in range(2 * ell + 1)], dtype=float)
    return (mono * fact)[:, ::-1]


@dataclass
class FourierResult:
    value: VellElement
    error: float
    radius: float
    envelope_tail: float
    converged: bool


def _gauss_legendre(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


def _envelope_tail(pn: float, ell: int, R: float) -> float:
    """``int_{|w| > R} (pn^2 |w|^2)^{-l-1} dw``, an upper bound for the absolute tail."""
    return 2 * math.pi * R ** (-2 * ell) / (2 * ell * pn ** (2 * ell + 2))


def fourier_A(space: HermitianSpace, v0, ell: int, g: GroupElement,
              spec: QuadratureSpec = QuadratureSpec(1e-6, 1e-6, 200, 16.0),
              max_radius: float = 256.0) -> FourierResult:
    """``int_C A_l((z b1 + v0) g) conj(psi(z)) dz`` with ``psi(z) = exp(2 pi i Re z)``.

    Polar coordinates are centred at the minimum of ``||pr2((z b1 + v0) g)||`` so
    the denominator is radial and the angular trapezoid rule is exact up to
    rounding.  Radii are split into half-period panels with Gauss-Legendre
    nodes; the oscillating tail is removed by repeated averaging of partial
    sums at half-integer radii, and the radius is doubled until successive
    accelerated values agree to tolerance.
    """
    v0 = to_arch(space, v0)
    if herm(space, v0, v0).real <= 0:
        raise ValueError("<v0, v0> must be positive")
    p_full = g.act(space.b1)
    q_full = g.act(v0)
    p, q = p_full[:2], q_full[:2]
    pn2 = float(np.sum(np.abs(p) ** 2))
    zc = -np.vdot(p, q) / pn2          # minimiser of |z p + q|
    D = float(np.sum(np.abs(zc * p + q) ** 2))
    if D <= PR2_EPS ** 2:
        raise SingularLocusError("pr2 vanishes on the integration line")
    nodes, weights = _gauss_legendre(24)
    panel = 0.5

    def ring_integral(r_lo, r_hi):
        rs = 0.5 * (r_hi - r_lo) * nodes + 0.5 * (r_hi + r_lo)
        ws = 0.5 * (r_hi - r_lo) * weights
        m = int(2 * math.pi * r_hi + 2 * ell + 48)
        m += m % 2
        th = 2 * math.pi * np.arange(m) / m
        zz = (zc + rs[:, None] * np.exp(1j * th)[None, :]).ravel()
        alpha = zz * p[0] + q[0]
        beta = zz * p[1] + q[1]
        nrm2 = np.abs(alpha) ** 2 + np.abs(beta) ** 2
        coeffs = _q_many(alpha, beta, ell) / (nrm2 ** (2 * ell + 1))[:, None]
        osc = np.exp(-2j * np.pi * zz.real)
        vals = (coeffs * osc[:, None]).reshape(len(rs), m, -1).mean(axis=1) * 2 * math.pi
        return np.sum(vals * (ws * rs)[:, None], axis=0)

    def accelerated(partials):
        seq = list(partials)
        levels = [seq[-1]]
        while len(seq) > 1:
            seq = [0.5 * (a + b) for a, b in zip(seq[:-1], seq[1:])]
            levels.append(seq[-1])
        err = float(np.max(np.abs(levels[-1] - levels[-2]))) if len(levels) > 1 else float("inf")
        return levels[-1], err

    R = float(spec.truncation_radius)
    n_avg = 10
    total = np.zeros(2 * ell + 1, dtype=complex)
    r_done = 0.0
    partials = []
    prev = None
    while True:
        target = R + n_avg * panel
        while r_done < target - 1e-12:
            total = total + ring_integral(r_done, r_done + panel)
            r_done += panel
            if r_done >= R - 1e-12:
                partials.append(total.copy())
        est, err = accelerated(partials[-(n_avg + 1):])
        scale = float(np.max(np.abs(est)))
        tol = max(spec.abs_tol, spec.rel_tol * scale)
        change = float(np.max(np.abs(est - prev))) if prev is not None else float("inf")
        if (err <= tol and change <= tol) or 2 * R > max_radius:
            converged = err <= tol and change <= tol
            break
        prev = est
        R *= 2
    return FourierResult(VellElement(ell, est), max(err, change if np.isfinite(change) else err),
                         R, _envelope_tail(math.sqrt(pn2), ell, R), converged)


def whittaker_constant(ell: int) -> float:
    """Constant ``C`` in ``fourier_A(v0, l, g) = C W_{i v0}(g)``; independent of ``n``, ``v0`` and ``g``."""
    return 2.0 ** (ell + 2) * math.pi ** (2 * ell + 1)


def eta_parameter(v0) -> np.ndarray:
    """Whittaker parameter ``T`` with ``eta_{v0} = chi_T`` on ``N``, namely ``T = i v0``."""
    return 1j * np.asarray(v0, dtype=complex)
