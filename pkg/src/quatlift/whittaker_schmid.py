"""Generalized Whittaker functions, the quaternionic functions Q/A/B and finite-difference Schmid operators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .field_space import HermitianSpace, SQRT2, herm, to_arch
from .group_lie import (GroupElement, LieElement, VellElement, chi_T, exp_elem, iwasawa,
                        linear_power, m_of, p_basis, vell_act)
from .special_quadrature import bessel_k_array

PR2_EPS = 1e-12
FD_STEP = 1e-5


class SingularLocusError(ValueError):
    """Raised when ``||pr2(v)||`` falls below the degeneracy guard."""


@dataclass(frozen=True)
class WhittakerSpec:
    space: HermitianSpace
    T: np.ndarray
    ell: int

    def __post_init__(self):
        T = to_arch(self.space, self.T)
        rat = self.space.arch_to_rat(T)
        if abs(rat[0]) > 1e-12 or abs(rat[-1]) > 1e-12:
            raise ValueError("T must lie in V0")
        if np.max(np.abs(T)) == 0:
            raise ValueError("T must be nonzero")
        object.__setattr__(self, "T", T)

    @property
    def norm_type(self) -> int:
        t = herm(self.space, self.T, self.T).real
        scale = max(1.0, float(np.sum(np.abs(self.T) ** 2)))
        if abs(t) <= 1e-12 * scale:
            return 0
        return 1 if t > 0 else -1


def _v0_coords(space: HermitianSpace, vec) -> np.ndarray:
    return space.arch_to_rat(to_arch(space, vec))[1:-1]


def act_v0(space: HermitianSpace, T, h) -> np.ndarray:
    """``T . h`` in arch coordinates, with ``h`` acting on V0 coordinates."""
    coords = _v0_coords(space, T) @ np.atleast_2d(np.asarray(h, dtype=complex))
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return full @ space.basis_change


def beta_T(space: HermitianSpace, T, h, z: complex, absolute: bool = False) -> complex:
    """``(4 pi / sqrt2) <u2, z T.h>``; the modulus when ``absolute`` is set."""
    if np.max(np.abs(to_arch(space, T))) == 0:
        raise ValueError("T must be nonzero")
    Th = act_v0(space, T, h)
    b = 4 * np.pi / SQRT2 * herm(space, space.u(2), complex(z) * Th)
    return abs(b) if absolute else complex(b)


def whittaker_on_M(spec: WhittakerSpec, h, z: complex, beta_mode: str = "complex",
                   with_flag: bool = False):
    """``sum_v |z|^{2l+2} (|beta|/beta)^v K_v(|beta|) [u1^{l-v}][u2^{l+v}]`` on ``m = (h, z)``.

    Returns the zero element when ``<T, T> < 0``; with ``with_flag`` also
    returns whether that vanishing branch was taken.
    """
    ell = spec.ell
    if spec.norm_type < 0:
        out = VellElement.zero(ell)
        return (out, True) if with_flag else out
    beta = beta_T(spec.space, spec.T, h, z, absolute=(beta_mode == "absolute"))
    x = abs(beta)
    if x == 0:
        raise AssertionError("beta vanished although <T,T> >= 0")
    orders = np.arange(-ell, ell + 1)
    phase = (x / beta) ** orders
    coeffs = abs(z) ** (2 * ell + 2) * phase * bessel_k_array(orders, x)
    out = VellElement(ell, coeffs)
    return (out, False) if with_flag else out


def whittaker_from_triple(spec: WhittakerSpec, triple) -> VellElement:
    base = whittaker_on_M(spec, triple.h, triple.z)
    return vell_act(triple.k_part, spec.ell, base) * chi_T(spec.space, spec.T, triple.n_part)


def whittaker(spec: WhittakerSpec, g: GroupElement) -> VellElement:
    """``W_T(n m k) = chi_T(n) W_T(m) . k``."""
    if spec.norm_type < 0:
        return VellElement.zero(spec.ell)
    return whittaker_from_triple(spec, iwasawa(spec.space, g))


# -- Q_l, A_l, B_{l,v} --

def q_ell(space: HermitianSpace, v, ell: int) -> VellElement:
    """``(alpha u1 + beta u2)^l (conj(beta) u1 - conj(alpha) u2)^l`` where ``pr2 v = alpha u1 + beta u2``."""
    a = to_arch(space, v)
    alpha, beta = a[0], a[1]
    mono = np.convolve(linear_power(alpha, beta, ell),
                       linear_power(np.conj(beta), -np.conj(alpha), ell))
    return VellElement.from_monomials(ell, mono)


def _pr2_norm(space: HermitianSpace, v) -> float:
    a = to_arch(space, v)
    return float(np.sqrt(abs(a[0]) ** 2 + abs(a[1]) ** 2))


def a_ell(space: HermitianSpace, v, ell: int) -> VellElement:
    nrm = _pr2_norm(space, v)
    if nrm <= PR2_EPS:
        raise SingularLocusError(f"||pr2(v)|| = {nrm:.3e} is on the singular locus")
    return q_ell(space, v, ell) / nrm ** (4 * ell + 2)


def b_ell(space: HermitianSpace, v, ell: int, g: GroupElement) -> VellElement:
    return a_ell(space, g.act(to_arch(space, v)), ell)


# -- finite-difference Lie derivatives --

def _values(phi, g):
    val = phi(g)
    if isinstance(val, VellElement):
        return val.coeffs
    return np.asarray(val, dtype=complex)


def real_derivative(phi: Callable, g: GroupElement, X, h_step: float = FD_STEP) -> np.ndarray:
    """``d/dt phi(g exp(tX))`` at 0 by central differences with one Richardson level."""
    if not 1e-7 <= h_step <= 1e-2:
        raise ValueError("finite-difference step outside the supported range")
    X = np.asarray(X, dtype=complex)

    def central(hh):
        fp = _values(phi, g @ exp_elem(X, hh))
        fm = _values(phi, g @ exp_elem(X, -hh))
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise FloatingPointError("non-finite sample in finite-difference stencil")
        return (fp - fm) / (2 * hh)

    d1, d2 = central(h_step), central(h_step / 2)
    return (4 * d2 - d1) / 3


def lie_derivative(phi: Callable, g: GroupElement, X: LieElement, h_step: float = FD_STEP) -> np.ndarray:
    """Right-regular action of a complexified element ``re + sqrt(-1) im``."""
    out = 0
    if np.max(np.abs(X.re)) > 0:
        out = out + real_derivative(phi, g, X.re, h_step)
    if np.max(np.abs(X.im)) > 0:
        out = out + 1j * real_derivative(phi, g, X.im, h_step)
    if np.isscalar(out):
        out = np.zeros_like(_values(phi, g))
    return out


# -- contractions V_l -> Sym^{2l-1} (indexed by the u1 exponent a = 0..2l-1) --

def contract_ubar(coeffs: np.ndarray, j: int, ell: int) -> np.ndarray:
    """Contraction with ``ubar_j``: lowers the ``u_j`` exponent by one."""
    out = np.zeros(2 * ell, dtype=complex)
    for idx, c in enumerate(coeffs):
        v = idx - ell
        a, b = ell - v, ell + v
        if j == 1 and a >= 1:
            out[a - 1] += c
        elif j == 2 and b >= 1:
            out[a] += c
    return out


def contract_u(coeffs: np.ndarray, j: int, ell: int) -> np.ndarray:
    """Contraction with ``u_j`` through the determinant pairing on V2+."""
    out = np.zeros(2 * ell, dtype=complex)
    for idx, c in enumerate(coeffs):
        v = idx - ell
        a, b = ell - v, ell + v
        if j == 1 and b >= 1:
            out[a] -= c
        elif j == 2 and a >= 1:
            out[a - 1] += c
    return out


@dataclass
class SchmidOutput:
    sign: str
    ell: int
    coeffs: np.ndarray          # shape (2l, n): Sym^{2l-1} monomial index x V_n^- index
    scale: float = 1.0
    derivatives: dict = field(default_factory=dict)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def residual(self) -> float:
        """Max coefficient divided by the local function scale."""
        return self.max_abs() / self.scale if self.scale > 0 else self.max_abs()


def schmid_apply(space: HermitianSpace, phi: Callable, ell: int, sign: str, g: GroupElement,
                 h_step: float = FD_STEP) -> SchmidOutput:
    """``D_l^(+/-) phi (g)`` by finite differences along every ``[u_j (x) conj(v_k)]^(+/-)``.

    Dual-basis weights are taken to be one for every ``(j, k)``.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    n = space.n
    out = np.zeros((2 * ell, n), dtype=complex)
    derivs = {}
    contract = contract_ubar if sign == "+" else contract_u
    for j in (1, 2):
        for k in range(1, n + 1):
            d = lie_derivative(phi, g, p_basis(space, j, k, sign), h_step)
            derivs[(j, k)] = d
            out[:, k - 1] += contract(d, j, ell)
    scale = float(np.max(np.abs(_values(phi, g))))
    return SchmidOutput(sign, ell, out, scale, derivs)


# -- scalar reductions on M --

@dataclass
class ScalarSystemReport:
    radial_plus: float
    radial_minus: float
    transverse_plus: float
    transverse_minus: float
    scale: float

    @property
    def max_residual(self) -> float:
        return max(self.radial_plus, self.radial_minus, self.transverse_plus, self.transverse_minus)

    @property
    def relative(self) -> float:
        return self.max_residual / self.scale if self.scale > 0 else self.max_residual


def _radial_derivative(phi: Callable, h, z: complex, space: HermitianSpace, h_step: float) -> np.ndarray:
    """``w d/dw`` of ``phi(m(h, w e^{is}))``: derivative in ``t`` of ``phi(m(h, e^t z))``."""
    def central(hh):
        fp = _values(phi, m_of(space, h, z * np.exp(hh)))
        fm = _values(phi, m_of(space, h, z * np.exp(-hh)))
        return (fp - fm) / (2 * hh)
    return (4 * central(h_step / 2) - central(h_step)) / 3


def scalar_system_residual(spec: WhittakerSpec, h, z: complex, phi: Callable | None = None,
                           h_step: float = FD_STEP) -> ScalarSystemReport:
    """Residuals of the radial and transverse scalar equations on ``m = (h, z)``.

    ``phi`` defaults to the closed-form Whittaker function; any other
    function ``G -> V_l`` (e.g. a perturbed one) may be supplied.
    """
    space, ell = spec.space, spec.ell
    if spec.norm_type < 0:
        raise ValueError("scalar system is checked only for <T, T> >= 0")
    if phi is None:
        phi = lambda g: whittaker(spec, g)
    m = m_of(space, h, z)
    W = _values(phi, m)
    radial = _radial_derivative(phi, h, z, space, h_step)
    beta = beta_T(space, spec.T, h, z)
    vs = np.arange(-ell, ell + 1)
    lower = radial[:-1] - (2 * ell + 2 + vs[:-1]) * W[:-1] + beta * W[1:]
    upper = radial[1:] - (2 * ell + 2 - vs[1:]) * W[1:] + np.conj(beta) * W[:-1]
    tp = tm = 0.0
    Th = act_v0(space, spec.T, h)
    for k in range(1, space.n):
        c = 2 * np.pi / SQRT2 * herm(space, space.v(k), complex(z) * Th)
        dp = lie_derivative(phi, m, p_basis(space, 2, k, "+"), h_step)
        dm = lie_derivative(phi, m, p_basis(space, 2, k, "-"), h_step)
        tp = max(tp, float(np.max(np.abs(dp[1:] - np.conj(c) * W[:-1]))))
        tm = max(tm, float(np.max(np.abs(dm[:-1] - c * W[1:]))))
    return ScalarSystemReport(float(np.max(np.abs(lower))), float(np.max(np.abs(upper))), tp, tm,
                              float(np.max(np.abs(W))))


def ftv_residual(spec: WhittakerSpec, h, z: complex, h_step: float = 1e-4) -> dict:
    """First-order ``f_{T,v}`` system and the second-order Bessel equation, relative residuals.

    ``f_{T,v} = w^{-2(l+1)} W_{T,v}`` as a function of ``t`` with ``w = e^t |z|``.
    """
    space, ell = spec.space, spec.ell
    w0 = abs(complex(z))
    phase = complex(z) / w0

    def f(t):
        w = w0 * np.exp(t)
        return whittaker_on_M(spec, h, w * phase).coeffs * w ** (-2 * ell - 2)

    def d1(hh):
        return (f(hh) - f(-hh)) / (2 * hh)

    def d2(hh):
        return (f(hh) - 2 * f(0.0) + f(-hh)) / hh ** 2

    F = f(0.0)
    D1 = (4 * d1(h_step / 2) - d1(h_step)) / 3
    D2 = (4 * d2(h_step / 2) - d2(h_step)) / 3
    beta = beta_T(space, spec.T, h, z)
    vs = np.arange(-ell, ell + 1)
    scale = float(np.max(np.abs(F)))
    first = max(float(np.max(np.abs(D1[:-1] - vs[:-1] * F[:-1] + beta * F[1:]))),
                float(np.max(np.abs(D1[1:] + vs[1:] * F[1:] + np.conj(beta) * F[:-1]))))
    second = float(np.max(np.abs(D2 - vs ** 2 * F - abs(beta) ** 2 * F)))
    return {"first_order": first / scale, "bessel": second / scale}


def isotropic_growth(spec: WhittakerSpec, hs, z: complex = 1.0):
    """``||W_T(h_i, z)||`` with ``|beta_T(h_i, z)|`` along ``hs``, for isotropic ``T``."""
    if spec.norm_type != 0:
        raise ValueError("T must be isotropic")
    out = []
    for h in hs:
        out.append((abs(beta_T(spec.space, spec.T, h, z)),
                    float(np.max(np.abs(whittaker_on_M(spec, h, z).coeffs)))))
    return out


# -- contraction identities for B_{l,v}, in binary forms indexed by the u1 exponent --

def _form_mul(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.convolve(f, g)


def _form_d(f: np.ndarray, j: int) -> np.ndarray:
    deg = len(f) - 1
    a = np.arange(deg + 1)
    if j == 1:
        return (a * f)[1:]
    return ((deg - a) * f)[:-1]


def contraction_identity_residual(space: HermitianSpace, v, g: GroupElement, ell: int, j: int,
                                  coef: float | None = None) -> float:
    """Relative size of the two quadratic contraction sums; zero for ``coef = 4l + 2``."""
    if not 1 <= j <= space.n:
        raise ValueError("j must lie in 1..n")
    w = g.act(to_arch(space, v))
    p2 = w[:2]
    if np.linalg.norm(p2) <= PR2_EPS:
        raise SingularLocusError("pr2(v g) vanishes")
    coef = 4 * ell + 2 if coef is None else coef
    alpha, beta = p2
    p = np.array([beta, alpha])                               # alpha u1 + beta u2
    pbar = np.array([-np.conj(alpha), np.conj(beta)])         # conj(beta) u1 - conj(alpha) u2
    ubar = {1: np.array([-1.0, 0.0]), 2: np.array([0.0, 1.0])}  # the images of conj(u1), conj(u2)
    unit = {1: np.array([0.0, 1.0]), 2: np.array([1.0, 0.0])}
    nrm2 = float(abs(alpha) ** 2 + abs(beta) ** 2)
    c = complex(herm(space, w, space.v(j)))
    ppbar = _form_mul(p, pbar)
    comps = {1: alpha, 2: beta}

    def pair_plus(f, i):                                       # <f, X_ij^+>
        return -_form_d(f, 2) if i == 1 else _form_d(f, 1)

    s1_terms, s2_terms = [], []
    for i in (1, 2):
        x_plus = c * unit[i]                                   # X_ij^+(p)
        x_minus_bar = np.conj(c) * ubar[i]                     # X_ij^-(pbar)
        d_i = _form_d(ppbar, i)
        s1_terms += [coef * np.conj(comps[i]) * c * _form_mul(p, d_i),
                     -2 * (ell - 1) * nrm2 * _form_mul(x_plus, d_i),
                     -2 * nrm2 * _form_mul(p, _form_d(_form_mul(x_plus, pbar), i))]
        e_i = pair_plus(ppbar, i)
        s2_terms += [coef * comps[i] * np.conj(c) * _form_mul(pbar, e_i),
                     -2 * (ell - 1) * nrm2 * _form_mul(x_minus_bar, e_i),
                     -2 * nrm2 * _form_mul(pbar, pair_plus(_form_mul(x_minus_bar, p), i))]
    res = []
    for terms in (s1_terms, s2_terms):
        total = np.sum(terms, axis=0)
        scale = max(float(np.max(np.abs(t))) for t in terms)
        res.append(float(np.max(np.abs(total))) / scale if scale > 0 else 0.0)
    return max(res)
