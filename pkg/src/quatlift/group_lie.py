"""Matrix model of U(2, n), its Lie algebra, Iwasawa coordinates and characters of N.

Group elements are complex matrices acting on the right of row vectors written
in the archimedean basis.  The formal tensor ``v (x) conj(w)`` names the
endomorphism ``x -> <x, w> v``; one-parameter subgroups act on rows through
``x . exp(tX) = exp(-tX)(x)``, so the right-action matrix of ``v (x) conj(w)`` is
that of ``x -> -<x, w> v``.  This sign is the one for which the unipotent
matrices, the coset formula ``v0 . n = v0 - <v0, z v0> b1`` and the M-action of
``exp(t(b2 (x) conj(b1) - b1 (x) conj(b2)))`` all come out as written in the
source formulas.

A complexified Lie element is stored as a pair ``(re, im)`` of real-form
matrices and stands for ``re + sqrt(-1) im``; the scalar ``i`` that appears
inside ``i(a (x) conj(b) + ...)`` multiplies the matrix itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Optional

import numpy as np
import scipy.linalg

from .field_space import HermitianSpace, SQRT2, to_arch

GROUP_TOL = 1e-12


class GroupElement:
    __slots__ = ("mat",)

    def __init__(self, mat):
        self.mat = np.asarray(mat, dtype=complex)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.mat @ other.mat)

    def inverse(self, space: Optional[HermitianSpace] = None) -> "GroupElement":
        if space is None:
            return GroupElement(np.linalg.inv(self.mat))
        J = space.arch_gram
        return GroupElement(J @ self.mat.conj().T @ J)

    def act(self, v) -> np.ndarray:
        return np.asarray(v, dtype=complex) @ self.mat

    def invariant_residual(self, space: HermitianSpace) -> float:
        J = space.arch_gram
        return float(np.max(np.abs(self.mat @ J @ self.mat.conj().T - J)))

    def check(self, space: HermitianSpace, tol: float = GROUP_TOL) -> "GroupElement":
        res = self.invariant_residual(space)
        if res > tol * max(1.0, np.max(np.abs(self.mat)) ** 2):
            raise ValueError(f"matrix does not preserve the hermitian form (residual {res:.2e})")
        return self

    @classmethod
    def identity(cls, space: HermitianSpace) -> "GroupElement":
        return cls(np.eye(space.dim, dtype=complex))

    def __repr__(self):
        return f"GroupElement({self.mat!r})"


@dataclass(frozen=True)
class LieElement:
    """Complexified Lie algebra element ``re + sqrt(-1) * im`` with ``re, im`` in the real form."""

    re: np.ndarray
    im: np.ndarray

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return LieElement(-self.re, -self.im)

    def scale(self, c: complex) -> "LieElement":
        """Multiply by a scalar of the complexification."""
        a, b = c.real, c.imag
        return LieElement(a * self.re - b * self.im, b * self.re + a * self.im)

    def parts(self):
        return self.re, self.im

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.re)), np.max(np.abs(self.im))))

    @classmethod
    def real(cls, mat) -> "LieElement":
        mat = np.asarray(mat, dtype=complex)
        return cls(mat, np.zeros_like(mat))

    @classmethod
    def zero(cls, dim: int) -> "LieElement":
        z = np.zeros((dim, dim), dtype=complex)
        return cls(z, z.copy())


def tensor(space: HermitianSpace, v, w) -> np.ndarray:
    """Right-action matrix of the formal tensor ``v (x) conj(w)``."""
    a, b = to_arch(space, v), to_arch(space, w)
    return -np.outer(space.arch_gram @ np.conj(b), a)


def endomorphism(space: HermitianSpace, v, w) -> np.ndarray:
    """Row matrix of ``x -> <x, w> v`` (no sign flip)."""
    return -tensor(space, v, w)


def in_real_form(space: HermitianSpace, mat, tol: float = 1e-12) -> bool:
    J = space.arch_gram
    return bool(np.max(np.abs(mat @ J + J @ np.conj(mat).T)) <= tol)


def theta(space: HermitianSpace, X):
    """Cartan involution ``Ad(iota)``; ``iota`` is the arch Gram as a matrix."""
    J = space.arch_gram
    if isinstance(X, LieElement):
        return LieElement(J @ X.re @ J, J @ X.im @ J)
    return J @ X @ J


def pm_element(space: HermitianSpace, a, b, sign: str) -> LieElement:
    """``[a (x) conj(b)]^(+/-)`` for arbitrary vectors ``a, b``."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    t_ab, t_ba = tensor(space, a, b), tensor(space, b, a)
    s = -1.0 if sign == "+" else 1.0
    return LieElement(0.5 * (t_ab - t_ba), s * 0.5 * 1j * (t_ab + t_ba))


def p_basis(space: HermitianSpace, j: int, k: int, sign: str) -> LieElement:
    if j not in (1, 2) or not 1 <= k <= space.n:
        raise IndexError(f"need j in (1, 2) and 1 <= k <= {space.n}")
    return pm_element(space, space.u(j), space.v(k), sign)


def iwasawa_p_basis(space: HermitianSpace, j: int, k: int, sign: str):
    """Split ``[u_j (x) conj(v_k)]^(+/-)`` into its n, m and k components."""
    if j not in (1, 2) or not 1 <= k <= space.n:
        raise IndexError(f"need j in (1, 2) and 1 <= k <= {space.n}")
    n = space.n
    b1, b2 = space.b1, space.b2
    zero = LieElement.zero(space.dim)
    s = 1.0 if sign == "+" else -1.0
    if j == 1 and k == n:
        x_n = LieElement(np.zeros_like(b1[:, None] * b1), -s * 0.5 * 2j * tensor(space, b1, b1))
        x_m = LieElement.real(0.5 * (tensor(space, b2, b1) - tensor(space, b1, b2)))
        x_k = LieElement(np.zeros_like(x_m.re),
                         s * 0.5 * 1j * (tensor(space, b1, b1) + tensor(space, b2, b2)))
        return x_n, x_m, x_k
    if j == 1:
        x_n = pm_element(space, b1, space.v(k), sign).scale(2 / SQRT2)
        x_k = -pm_element(space, space.v(n), space.v(k), sign)
        return x_n, zero, x_k
    if k == n:
        x_n = pm_element(space, space.u(2), b1, sign).scale(2 / SQRT2)
        x_k = -pm_element(space, space.u(2), space.u(1), sign)
        return x_n, zero, x_k
    return zero, p_basis(space, 2, k, sign), zero


# -- subalgebra membership (right-action matrices, rational basis filtration) --

def _rational_matrix(space: HermitianSpace, mat) -> np.ndarray:
    P = space.basis_change
    return P @ mat @ np.linalg.inv(P)


def in_n(space: HermitianSpace, mat, tol: float = 1e-12) -> bool:
    r = _rational_matrix(space, mat)
    dim = space.dim
    # b1 -> 0, V0 -> span(b1), b2 -> V0 + span(b1)
    ok = np.all(np.abs(r[0]) <= tol)
    ok &= np.all(np.abs(r[1:dim - 1, 1:]) <= tol)
    ok &= abs(r[dim - 1, dim - 1]) <= tol
    return bool(ok)


def in_m(space: HermitianSpace, mat, tol: float = 1e-12) -> bool:
    r = _rational_matrix(space, mat)
    dim = space.dim
    mask = np.zeros((dim, dim), dtype=bool)
    mask[0, 0] = mask[dim - 1, dim - 1] = True
    mask[1:dim - 1, 1:dim - 1] = True
    return bool(np.all(np.abs(r[~mask]) <= tol))


def in_k(space: HermitianSpace, mat, tol: float = 1e-12) -> bool:
    return bool(np.all(np.abs(mat[:2, 2:]) <= tol) and np.all(np.abs(mat[2:, :2]) <= tol))


def lie_in(pred, space, X: LieElement, tol: float = 1e-12) -> bool:
    return pred(space, X.re, tol) and pred(space, X.im, tol)


# -- exponentials and named subgroups --

def exp_elem(X, t: float = 1.0) -> GroupElement:
    """``exp(tX)`` for a real-form element; exact polynomial when ``X^3 = 0``."""
    if isinstance(X, LieElement):
        if np.max(np.abs(X.im)) > 0:
            raise ValueError("only real-form elements exponentiate into the group")
        X = X.re
    M = t * np.asarray(X, dtype=complex)
    M2 = M @ M
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M2 @ M)) <= 1e-14 * scale ** 3:
        return GroupElement(np.eye(M.shape[0]) + M + 0.5 * M2)
    return GroupElement(scipy.linalg.expm(M))


def n_generator(space: HermitianSpace, x0) -> np.ndarray:
    """Real-form element ``b1 (x) conj(x0) - x0 (x) conj(b1)``."""
    x0 = _v0_vector(space, x0)
    return tensor(space, space.b1, x0) - tensor(space, x0, space.b1)


def _v0_vector(space: HermitianSpace, x0) -> np.ndarray:
    a = to_arch(space, x0)
    r = space.arch_to_rat(a)
    if abs(r[0]) > 1e-12 or abs(r[-1]) > 1e-12:
        raise ValueError("vector is not in V0")
    return a


def n_of(space: HermitianSpace, x0) -> GroupElement:
    return exp_elem(n_generator(space, x0))


def center_generator(space: HermitianSpace) -> np.ndarray:
    return 1j * tensor(space, space.b1, space.b1)


def z_of(space: HermitianSpace, s: float) -> GroupElement:
    return exp_elem(center_generator(space), s)


def m_of(space: HermitianSpace, h, z: complex) -> GroupElement:
    """``(u, v, u_dual) -> (z^-1 u, v h, conj(z) u_dual)``; ``h`` acts on V0 coordinates."""
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    n = space.n
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    if h.shape != (n, n):
        raise ValueError(f"h must be {n}x{n}")
    J0 = space.v0_gram()
    if np.max(np.abs(h @ J0 @ h.conj().T - J0)) > 1e-10:
        raise ValueError("h does not preserve the V0 form")
    rat = np.zeros((n + 2, n + 2), dtype=complex)
    rat[0, 0] = 1 / z
    rat[1:n + 1, 1:n + 1] = h
    rat[n + 1, n + 1] = np.conj(z)
    P = space.basis_change
    return GroupElement(np.linalg.inv(P) @ rat @ P)


def rational_matrix(space: HermitianSpace, g: GroupElement) -> np.ndarray:
    return _rational_matrix(space, g.mat)


def is_in_n(space: HermitianSpace, g: GroupElement, tol: float = 1e-10) -> bool:
    r = rational_matrix(space, g)
    dim = space.dim
    e = np.eye(dim)
    ok = np.all(np.abs(r[0] - e[0]) <= tol)
    ok &= np.all(np.abs(r[1:dim - 1, 1:] - e[1:dim - 1, 1:]) <= tol)
    ok &= abs(r[dim - 1, dim - 1] - 1) <= tol
    return bool(ok)


def n_coordinates(space: HermitianSpace, g: GroupElement):
    """Return ``(x0, s)`` with ``g = z_of(s) @ n_of(x0)`` for ``g`` in N."""
    if not is_in_n(space, g):
        raise ValueError("element is not in N")
    r = rational_matrix(space, g)
    row = r[-1]
    x0_rat = np.zeros(space.dim, dtype=complex)
    x0_rat[1:-1] = row[1:-1]
    x0 = x0_rat @ space.basis_change
    c = row[0]
    q = np.sum(np.abs(x0_rat[1:-1]) ** 2 * np.diag(space.v0_gram()))
    s = 1j * (c + 0.5 * q)
    return x0, float(s.real)


@dataclass
class IwasawaTriple:
    n_part: GroupElement
    h: np.ndarray
    z: complex
    k_part: GroupElement

    def m_part(self, space: HermitianSpace) -> GroupElement:
        return m_of(space, self.h, self.z)

    def product(self, space: HermitianSpace) -> GroupElement:
        return self.n_part @ self.m_part(space) @ self.k_part


def _unitary_completion(first: np.ndarray) -> np.ndarray:
    """Unitary matrix whose first row is the unit vector ``first``."""
    m = first.shape[0]
    if m == 2:
        a, b = first
        return np.array([[a, b], [-np.conj(b), np.conj(a)]])
    basis = np.vstack([first, np.eye(m, dtype=complex)])
    q, _ = np.linalg.qr(basis.T)
    q = q[:, :m].T
    # QR fixes rows only up to phase
    q[0] = first
    return q


def iwasawa(space: HermitianSpace, g: GroupElement) -> IwasawaTriple:
    """Decompose ``g = n m k`` with ``z > 0`` real (phases are pushed into k)."""
    n = space.n
    b1g = g.act(space.b1)
    p = b1g[:2]
    pn = np.linalg.norm(p)
    if pn < 1e-300:
        raise ValueError("b1.g has no positive component: input is not a group element")
    z = 1.0 / (SQRT2 * pn)
    # b1 k = z b1 g  with b1 = (u1 + vn)/sqrt2
    first_plus = SQRT2 * z * p
    first_minus = SQRT2 * z * b1g[2:]
    k2 = _unitary_completion(first_plus)
    # k sends vn to first_minus; complete inside Vn-
    kn_rows = _unitary_completion(first_minus)
    order = list(range(1, n)) + [0]
    kn = kn_rows[order] if n > 1 else kn_rows
    k = np.zeros((n + 2, n + 2), dtype=complex)
    k[:2, :2] = k2
    k[2:, 2:] = kn
    k_el = GroupElement(k)
    p_el = g @ k_el.inverse(space)
    r = rational_matrix(space, p_el)
    h = r[1:n + 1, 1:n + 1]
    m_el = m_of(space, h, z)
    n_el = p_el @ m_el.inverse(space)
    return IwasawaTriple(n_el, h, complex(z), k_el)


def chi_T(space: HermitianSpace, T, n: GroupElement) -> complex:
    """Character with ``chi_T(exp(w (x) conj(b1) - b1 (x) conj(w))) = exp(-2 pi i Im<w, T>)``.

    This is the sign for which the closed-form Whittaker function is
    annihilated by the Schmid operators (see ``whittaker_schmid``).
    """
    from .field_space import herm
    T = _v0_vector(space, T)
    x0, _ = n_coordinates(space, n)
    # n = z_of(s) n_of(x0) and n_of(x0) = exp(w (x) conj(b1) - b1 (x) conj(w)) with w = -x0
    return complex(np.exp(2j * np.pi * np.imag(herm(space, x0, T))))


def eta(space: HermitianSpace, v0, n: GroupElement) -> complex:
    """``exp(2 pi i Re<-v0, x>)`` on ``n = z_of(s) n_of(x)``."""
    from .field_space import herm
    x0, _ = n_coordinates(space, n)
    return complex(np.exp(-2j * np.pi * np.real(herm(space, v0, x0))))


# -- the minimal K-type --

class VellElement:
    """Element of ``Sym^{2l} V2+ (x) det^{-l}`` on the basis ``[u1^{l-v}][u2^{l+v}]``.

    ``coeffs[v + l]`` is the coefficient of ``u1^{l-v} u2^{l+v} / ((l-v)! (l+v)!)``.
    """

    __slots__ = ("ell", "coeffs")

    def __init__(self, ell: int, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape[-1] != 2 * ell + 1:
            raise ValueError(f"need {2 * ell + 1} coefficients for ell={ell}")
        self.ell = int(ell)
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ell: int) -> "VellElement":
        return cls(ell, np.zeros(2 * ell + 1, dtype=complex))

    @classmethod
    def basis(cls, ell: int, v: int) -> "VellElement":
        c = np.zeros(2 * ell + 1, dtype=complex)
        c[v + ell] = 1.0
        return cls(ell, c)

    def __getitem__(self, v: int) -> complex:
        return self.coeffs[v + self.ell]

    def __add__(self, other: "VellElement") -> "VellElement":
        return VellElement(self.ell, self.coeffs + other.coeffs)

    def __sub__(self, other: "VellElement") -> "VellElement":
        return VellElement(self.ell, self.coeffs - other.coeffs)

    def __neg__(self):
        return VellElement(self.ell, -self.coeffs)

    def __mul__(self, c) -> "VellElement":
        return VellElement(self.ell, self.coeffs * c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "VellElement":
        return VellElement(self.ell, self.coeffs / c)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2 * vell_weights(self.ell))))

    def monomials(self) -> np.ndarray:
        """Coefficients on plain monomials ``u1^a u2^(2l-a)``, indexed by ``a``."""
        return self.coeffs[::-1] / _fact_products(self.ell)[::-1]

    @classmethod
    def from_monomials(cls, ell: int, mono) -> "VellElement":
        mono = np.asarray(mono, dtype=complex)
        return cls(ell, (mono * _fact_products(ell)[::-1])[::-1])

    def __repr__(self):
        return f"VellElement(ell={self.ell}, coeffs={self.coeffs!r})"


def _fact_products(ell: int) -> np.ndarray:
    """``(l-v)! (l+v)!`` for ``v = -l..l``."""
    return np.array([float(factorial(ell - v) * factorial(ell + v)) for v in range(-ell, ell + 1)])


def vell_weights(ell: int) -> np.ndarray:
    """Weights of the U(2)-invariant norm on the factorial basis (``||Q_l(v)|| = ||pr2 v||^{2l}``)."""
    return 1.0 / (_fact_products(ell) * float(factorial(ell)) ** 2)


def linear_power(alpha: complex, beta: complex, m: int) -> np.ndarray:
    """Monomial coefficients of ``(alpha u1 + beta u2)^m`` indexed by the u1-exponent."""
    out = np.array([1.0 + 0j])
    lin = np.array([beta, alpha], dtype=complex)
    for _ in range(m):
        out = np.convolve(out, lin)
    return out


def substitute(mono: np.ndarray, k2: np.ndarray) -> np.ndarray:
    """Monomials of ``p(u1 k, u2 k)`` where ``u_i k = k2[i,0] u1 + k2[i,1] u2``."""
    deg = mono.shape[0] - 1
    p1 = [linear_power(k2[0, 0], k2[0, 1], a) for a in range(deg + 1)]
    p2 = [linear_power(k2[1, 0], k2[1, 1], b) for b in range(deg + 1)]
    out = np.zeros(deg + 1, dtype=complex)
    for a, c in enumerate(mono):
        if c != 0:
            out += c * np.convolve(p1[a], p2[deg - a])
    return out


def is_in_k(space: HermitianSpace, k: GroupElement, tol: float = 1e-10) -> bool:
    return in_k(space, k.mat, tol) and k.invariant_residual(space) <= tol


def vell_act(k, ell: int, c: VellElement) -> VellElement:
    """Right action of ``k`` in ``K = U(2) x U(n)``: substitution times ``det^{-l}``."""
    mat = k.mat if isinstance(k, GroupElement) else np.asarray(k, dtype=complex)
    if np.max(np.abs(mat[:2, 2:])) > 1e-10 or np.max(np.abs(mat[2:, :2])) > 1e-10:
        raise ValueError("element is not in K (not block diagonal)")
    k2 = mat[:2, :2]
    if np.max(np.abs(k2 @ k2.conj().T - np.eye(2))) > 1e-10:
        raise ValueError("element is not in K (positive block not unitary)")
    if c.ell != ell:
        raise ValueError("weight mismatch")
    mono = substitute(c.monomials(), k2)
    return VellElement.from_monomials(ell, mono) * np.linalg.det(k2) ** (-ell)


def iwasawa_identity_residual(space: HermitianSpace, j: int, k: int, sign: str) -> tuple:
    """``max |X - (X_n + X_m + X_k)|`` and whether each part lies in its subalgebra."""
    x_n, x_m, x_k = iwasawa_p_basis(space, j, k, sign)
    X = p_basis(space, j, k, sign)
    total = x_n + x_m + x_k
    res = max(float(np.max(np.abs(X.re - total.re))), float(np.max(np.abs(X.im - total.im))))
    members = lie_in(in_n, space, x_n) and lie_in(in_m, space, x_m) and lie_in(in_k, space, x_k)
    return res, members


def random_lie_element(space: HermitianSpace, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of the real Lie algebra: ``S J`` with ``S`` anti-hermitian."""
    dim = space.dim
    H = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (H - H.conj().T) @ space.arch_gram


def random_group_element(space: HermitianSpace, rng: np.random.Generator, scale: float = 0.5) -> GroupElement:
    return exp_elem(random_lie_element(space, rng, scale))
