"""Exact arithmetic in Q(sqrt(-d)) and the hermitian space of signature (2, n).

Coordinates come in two bases:

* rational basis ``{b1, h1, ..., hn, b2}`` with ``<b1, b2> = 1``, ``b1`` and ``b2``
  isotropic and the middle block ``diag(1, -1, ..., -1)``;
* archimedean basis ``{u1, u2, v1, ..., vn}`` with Gram ``diag(1, 1, -1, ..., -1)``.

Vectors are row vectors; the form is conjugate linear in the second slot,
``<v, w> = sum_ij v_i G_ij conj(w_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

RATIONAL = "rational"
ARCH = "arch"

SQRT2 = np.sqrt(2.0)


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("exact arithmetic needs int, Fraction or str, got float")
    return Fraction(x)


class FieldElement:
    """Element ``x + y*sqrt(-d)`` of the imaginary quadratic field ``Q(sqrt(-d))``."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x=0, y=0, d: int = 1):
        self.x = _frac(x)
        self.y = _frac(y)
        self.d = int(d)

    @classmethod
    def coerce(cls, value, d: int) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.d != d:
                raise ValueError(f"field mismatch: d={value.d} vs d={d}")
            return value
        return cls(value, 0, d)

    def _other(self, other) -> "FieldElement":
        return FieldElement.coerce(other, self.d)

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(
            self.x * o.x - self.d * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.d,
        )

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        return FieldElement(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x + self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> "FieldElement":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return FieldElement(self.x / nrm, -self.y / nrm, self.d)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def is_rational(self) -> bool:
        return self.y == 0

    def __complex__(self):
        return complex(float(self.x), float(self.y) * np.sqrt(self.d))

    def __repr__(self):
        return f"FieldElement({self.x}, {self.y}, d={self.d})"

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        root = f"sqrt(-{self.d})"
        mag = abs(self.y)
        imag = root if mag == 1 else f"{mag}*{root}"
        if self.x == 0:
            return ("-" if self.y < 0 else "") + imag
        return f"{self.x}{'-' if self.y < 0 else '+'}{imag}"


Scalar = Union[int, Fraction, FieldElement]


@dataclass(frozen=True)
class HermitianSpace:
    """The hermitian space of signature (2, n) over ``Q(sqrt(-d))``.

    ``basis_change`` has as its rows the rational basis vectors written in
    archimedean coordinates, so ``arch = rat @ basis_change``.
    """

    n: int
    d: int
    gram_rational: tuple
    basis_change: np.ndarray
    arch_gram: np.ndarray

    @property
    def dim(self) -> int:
        return self.n + 2

    # archimedean coordinates of the named vectors
    def u(self, i: int) -> np.ndarray:
        if i not in (1, 2):
            raise IndexError("u index must be 1 or 2")
        e = np.zeros(self.dim, dtype=complex)
        e[i - 1] = 1.0
        return e

    def v(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.n:
            raise IndexError(f"v index must be in 1..{self.n}")
        e = np.zeros(self.dim, dtype=complex)
        e[1 + k] = 1.0
        return e

    @property
    def b1(self) -> np.ndarray:
        return self.basis_change[0].astype(complex)

    @property
    def b2(self) -> np.ndarray:
        return self.basis_change[-1].astype(complex)

    def h(self, k: int) -> np.ndarray:
        return self.basis_change[k].astype(complex)

    def rat_to_arch(self, coords) -> np.ndarray:
        c = np.array([complex(x) for x in coords], dtype=complex)
        return c @ self.basis_change

    def arch_to_rat(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=complex) @ np.linalg.inv(self.basis_change)

    def v0_basis(self) -> np.ndarray:
        """Rows are ``h1, ..., hn`` (that is ``u2, v1, ..., v_{n-1}``) in arch coordinates."""
        return self.basis_change[1:-1].astype(complex)

    def v0_gram(self) -> np.ndarray:
        return np.diag([1.0] + [-1.0] * (self.n - 1))


@dataclass(frozen=True)
class SpaceVector:
    coords: tuple
    basis_tag: str = ARCH

    def __post_init__(self):
        if self.basis_tag not in (RATIONAL, ARCH):
            raise ValueError(f"unknown basis tag {self.basis_tag!r}")

    @classmethod
    def rational(cls, coords: Sequence[Scalar], d: int) -> "SpaceVector":
        return cls(tuple(FieldElement.coerce(c, d) for c in coords), RATIONAL)

    @classmethod
    def arch(cls, coords) -> "SpaceVector":
        return cls(tuple(complex(c) for c in coords), ARCH)

    def __len__(self):
        return len(self.coords)


def make_space(n: int, d: int) -> HermitianSpace:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    if not isinstance(d, (int, np.integer)) or not is_squarefree(int(d)):
        raise ValueError(f"d must be a squarefree positive integer, got {d!r}")
    n, d = int(n), int(d)
    dim = n + 2
    zero, one = FieldElement(0, 0, d), FieldElement(1, 0, d)
    gram = [[zero] * dim for _ in range(dim)]
    gram[0][dim - 1] = one
    gram[dim - 1][0] = one
    for k in range(1, n + 1):
        gram[k][k] = one if k == 1 else -one
    gram_t = tuple(tuple(row) for row in gram)

    change = np.zeros((dim, dim))
    # b1 = (u1 + vn)/sqrt2, b2 = (u1 - vn)/sqrt2, h1 = u2, h_{k+1} = v_k
    change[0, 0] = change[0, dim - 1] = 1 / SQRT2
    change[dim - 1, 0] = 1 / SQRT2
    change[dim - 1, dim - 1] = -1 / SQRT2
    for k in range(1, n + 1):
        change[k, k] = 1.0
    arch_gram = np.diag([1.0, 1.0] + [-1.0] * n)
    return HermitianSpace(n, d, gram_t, change, arch_gram)


def to_arch(space: HermitianSpace, v) -> np.ndarray:
    """Archimedean coordinates of ``v`` as a complex array (arrays pass through)."""
    if isinstance(v, SpaceVector):
        if len(v) != space.dim:
            raise ValueError(f"dimension mismatch: {len(v)} vs {space.dim}")
        if v.basis_tag == ARCH:
            return np.array(v.coords, dtype=complex)
        return space.rat_to_arch(v.coords)
    arr = np.asarray(v, dtype=complex)
    if arr.shape[-1] != space.dim:
        raise ValueError(f"dimension mismatch: {arr.shape[-1]} vs {space.dim}")
    return arr


def to_rational_coords(space: HermitianSpace, v) -> np.ndarray:
    return space.arch_to_rat(to_arch(space, v))


def _is_exact(v) -> bool:
    return isinstance(v, SpaceVector) and v.basis_tag == RATIONAL


def herm(space: HermitianSpace, v, w):
    """The hermitian form; exact ``FieldElement`` when both inputs are rational."""
    if _is_exact(v) and _is_exact(w):
        if len(v) != space.dim or len(w) != space.dim:
            raise ValueError("dimension mismatch")
        total = FieldElement(0, 0, space.d)
        g = space.gram_rational
        for i, vi in enumerate(v.coords):
            for j, wj in enumerate(w.coords):
                if g[i][j] != 0:
                    total = total + vi * g[i][j] * wj.conj()
        return total
    a, b = to_arch(space, v), to_arch(space, w)
    signs = np.diag(space.arch_gram)
    out = np.sum(a * signs * np.conj(b), axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def majorant(space: HermitianSpace, v, w):
    """Positive definite form ``(v, w) = <v, w.iota>``."""
    a, b = to_arch(space, v), to_arch(space, w)
    out = np.sum(a * np.conj(b), axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def majorant_norm(space: HermitianSpace, v) -> float:
    a = to_arch(space, v)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def pr2(space: HermitianSpace, v) -> np.ndarray:
    """Projection onto the positive plane spanned by ``u1, u2``."""
    a = to_arch(space, v).copy()
    a[..., 2:] = 0
    return a


def prn(space: HermitianSpace, v) -> np.ndarray:
    """Projection onto the negative definite part spanned by ``v1..vn``."""
    a = to_arch(space, v).copy()
    a[..., :2] = 0
    return a


def deltabar(space: HermitianSpace, v) -> np.ndarray:
    """If ``pr2(v) = alpha u1 + beta u2`` return ``conj(beta) u1 - conj(alpha) u2``."""
    a = to_arch(space, v)
    out = np.zeros_like(a)
    out[..., 0] = np.conj(a[..., 1])
    out[..., 1] = -np.conj(a[..., 0])
    return out
