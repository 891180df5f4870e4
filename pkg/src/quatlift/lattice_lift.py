"""O_E-lattice enumeration, truncated Poincare-type lifts, torus Fourier extraction and exact cyclotomic coefficients."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .field_space import FieldElement, HermitianSpace, SpaceVector, herm
from .group_lie import GroupElement, VellElement, n_of, z_of
from .theta_arch import _q_many
from .whittaker_schmid import PR2_EPS, SingularLocusError, schmid_apply

MAX_CANDIDATES = 5_000_000
MAX_CONDUCTOR = 4096


def integer_generator(d: int) -> FieldElement:
    """``omega`` with ``O_E = Z + Z omega``."""
    if d % 4 == 3:
        return FieldElement(Fraction(1, 2), Fraction(1, 2), d)
    return FieldElement(0, 1, d)


@dataclass(frozen=True)
class LatticeSpec:
    """O_E-module spanned by the rows of ``basis_matrix`` (rational coordinates)."""
    basis_matrix: tuple
    d: int

    def __post_init__(self):
        rows = tuple(tuple(FieldElement.coerce(x, self.d) for x in row) for row in self.basis_matrix)
        object.__setattr__(self, "basis_matrix", rows)
        m = np.array([[complex(x) for x in row] for row in rows])
        if m.shape[0] != m.shape[1] or abs(np.linalg.det(m)) < 1e-12:
            raise ValueError("lattice basis must be square and of full rank")

    @classmethod
    def standard(cls, space: HermitianSpace) -> "LatticeSpec":
        dim = space.dim
        return cls(tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)), space.d)

    @property
    def dim(self) -> int:
        return len(self.basis_matrix)

    def real_generators(self) -> list:
        """Z-basis ``e_k, omega e_k`` as exact rational-coordinate rows."""
        omega = integer_generator(self.d)
        gens = []
        for row in self.basis_matrix:
            gens.append(list(row))
            gens.append([omega * x for x in row])
        return gens


def _generator_arch(space: HermitianSpace, lattice: LatticeSpec) -> np.ndarray:
    gens = lattice.real_generators()
    return np.array([[complex(x) for x in row] for row in gens]) @ space.basis_change


def _exact_norm_form(space: HermitianSpace, lattice: LatticeSpec):
    """Integer matrix ``H`` and denominator ``D`` with ``<v, v> = c^T H c / D`` for ``v = sum c_i gen_i``."""
    gens = lattice.real_generators()
    k = len(gens)
    vecs = [SpaceVector.rational(g, space.d) for g in gens]
    H = [[herm(space, vecs[i], vecs[j]).x for j in range(k)] for i in range(k)]
    # the real part of <g_i, g_j> is the symmetric bilinear form of the real quadratic form
    den = 1
    for row in H:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    Hint = np.array([[int(x * den) for x in row] for row in H], dtype=object)
    return Hint, den


def majorant_gram(space: HermitianSpace, lattice: LatticeSpec, g: GroupElement | None = None) -> np.ndarray:
    A = _generator_arch(space, lattice)
    if g is not None:
        A = A @ g.mat
    return np.real(A @ A.conj().T)


def fincke_pohst(gram: np.ndarray, bound: float, max_points: int = MAX_CANDIDATES):
    """All integer vectors ``c`` with ``c^T gram c <= bound``; returns (array, complete flag)."""
    gram = np.asarray(gram, dtype=float)
    D = gram.shape[0]
    L = np.linalg.cholesky(gram)            # gram = L L^T
    R = L.T                                 # c^T gram c = |R c|^2, R upper triangular
    q_diag = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]            # normalized rows
    eps = 1e-9 * max(1.0, bound)
    partial = np.zeros((1, 0), dtype=np.int64)
    rem = np.array([bound + eps])
    complete = True
    for i in range(D - 1, -1, -1):
        if partial.shape[1]:
            centre = -(partial @ mu[i, i + 1:])
        else:
            centre = np.zeros(partial.shape[0])
        width = np.sqrt(np.maximum(rem, 0.0) / q_diag[i])
        lo = np.ceil(centre - width).astype(np.int64)
        hi = np.floor(centre + width).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > max_points:
            complete = False
            keep = np.cumsum(counts) <= max_points
            partial, rem, centre, lo, counts = partial[keep], rem[keep], centre[keep], lo[keep], counts[keep]
            total = int(counts.sum())
        parent = np.repeat(np.arange(len(counts)), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        xi = lo[parent] + offsets
        new_rem = rem[parent] - q_diag[i] * (xi - centre[parent]) ** 2
        ok = new_rem >= -eps
        partial = np.concatenate([xi[ok, None], partial[parent[ok]]], axis=1)
        rem = new_rem[ok]
    return partial, complete


def _graded_order(coords: np.ndarray) -> np.ndarray:
    if len(coords) == 0:
        return coords
    keys = [coords[:, j] for j in range(coords.shape[1] - 1, -1, -1)] + [np.abs(coords).sum(axis=1)]
    return coords[np.lexsort(keys)]


@dataclass
class Enumeration:
    coords: np.ndarray          # integer coefficients on the real generators
    vectors: np.ndarray         # arch coordinates
    complete: bool
    candidates: int

    def __len__(self):
        return len(self.coords)

    def space_vectors(self, space: HermitianSpace, lattice: LatticeSpec) -> list:
        gens = lattice.real_generators()
        out = []
        for c in self.coords:
            comps = [FieldElement(0, 0, space.d)] * lattice.dim
            for ci, gen in zip(c, gens):
                if ci:
                    comps = [a + int(ci) * b for a, b in zip(comps, gen)]
            out.append(SpaceVector.rational(comps, space.d))
        return out


def _exact_norm_mask(coords: np.ndarray, Hint, den: int, t: Fraction) -> np.ndarray:
    if len(coords) == 0:
        return np.zeros(0, dtype=bool)
    target = t * den
    if target.denominator != 1:
        return np.zeros(len(coords), dtype=bool)
    target = int(target)
    H64 = np.array(Hint, dtype=np.int64)
    if np.max(np.abs(H64)) * np.max(np.abs(coords)) ** 2 * coords.shape[1] ** 2 < 2 ** 62:
        vals = np.einsum("ki,ij,kj->k", coords, H64, coords)
        return vals == target
    return np.array([int(np.dot(c.astype(object), Hint.dot(c.astype(object)))) == target for c in coords])


def enumerate_norm(space: HermitianSpace, lattice: LatticeSpec, t, R: float,
                   g: GroupElement | None = None, max_points: int = MAX_CANDIDATES) -> Enumeration:
    """Lattice vectors with exact ``<v, v> = t`` and majorant ``||v g||^2 <= R`` (``g = 1`` by default)."""
    if R <= 0:
        raise ValueError("R must be positive")
    t = Fraction(t)
    gram = majorant_gram(space, lattice, g)
    if np.min(np.linalg.eigvalsh(gram)) <= 0:
        raise ValueError("majorant Gram is not positive definite")
    pts, complete = fincke_pohst(gram, R, max_points)
    Hint, den = _exact_norm_form(space, lattice)
    pts = pts[_exact_norm_mask(pts, Hint, den, t)]
    pts = _graded_order(pts)
    vecs = pts.astype(float) @ _generator_arch(space, lattice) if len(pts) else np.zeros((0, space.dim), complex)
    return Enumeration(pts, vecs, complete, len(pts))


def brute_force_norm(space: HermitianSpace, lattice: LatticeSpec, t, R: float,
                     max_candidates: int = 100_000) -> Enumeration:
    """Box oracle: every integer vector in the bounding box of the majorant ellipsoid."""
    t = Fraction(t)
    gram = majorant_gram(space, lattice)
    inv = np.linalg.inv(gram)
    bounds = np.floor(np.sqrt(R * np.diag(inv)) + 1e-9).astype(int)
    total = int(np.prod(2 * bounds + 1))
    if total > max_candidates:
        raise ValueError(f"box has {total} candidates, above the oracle budget")
    grid = np.array(list(itertools.product(*[range(-b, b + 1) for b in bounds])), dtype=np.int64)
    norms = np.einsum("ki,ij,kj->k", grid, gram, grid)
    grid = grid[norms <= R + 1e-9 * max(1.0, R)]
    Hint, den = _exact_norm_form(space, lattice)
    grid = _graded_order(grid[_exact_norm_mask(grid, Hint, den, t)])
    vecs = grid.astype(float) @ _generator_arch(space, lattice) if len(grid) else np.zeros((0, space.dim), complex)
    return Enumeration(grid, vecs, True, total)


def shortest_length(space: HermitianSpace, lattice: LatticeSpec) -> float:
    gram = majorant_gram(space, lattice)
    pts, _ = fincke_pohst(gram, float(np.min(np.diag(gram))))
    norms = np.einsum("ki,ij,kj->k", pts, gram, pts)
    return float(np.sqrt(np.min(norms[norms > 1e-9])))


# -- lattice sums of B_{l,v} --

def a_ell_many(vectors: np.ndarray, ell: int) -> np.ndarray:
    """``A_l`` at each row (arch coordinates); shape (K, 2l+1)."""
    alpha, beta = vectors[:, 0], vectors[:, 1]
    nrm2 = np.abs(alpha) ** 2 + np.abs(beta) ** 2
    if len(nrm2) and np.min(nrm2) <= PR2_EPS ** 2:
        raise SingularLocusError("pr2 vanishes on a lattice vector")
    return _q_many(alpha, beta, ell) / (nrm2 ** (2 * ell + 1))[:, None]


@dataclass
class LiftResult:
    value: VellElement
    tail: float
    terms: int
    complete: bool


def epstein_tail(space: HermitianSpace, lattice: LatticeSpec, ell: int, g: GroupElement, R: float) -> float:
    """Upper bound for the norm of the omitted terms ``||v g||^2 > R``.

    ``||B_{l,v}(g)|| = ||pr2(v g)||^{-2l-2} <= (||v g||^2 / 2)^{-l-1}``, and a packing bound
    ``#{||w|| <= r} <= (2r/lambda + 1)^D`` on the lattice ``Lambda g`` gives a tail
    proportional to ``R^{-(l-n-1)}`` through partial summation.
    """
    D = 2 * lattice.dim
    if 2 * ell + 2 <= D:
        return float("inf")
    gram = majorant_gram(space, lattice, g)
    pts, _ = fincke_pohst(gram, float(np.min(np.diag(gram))))
    norms = np.einsum("ki,ij,kj->k", pts, gram, pts)
    lam = float(np.sqrt(np.min(norms[norms > 1e-9])))
    r0 = math.sqrt(R)
    const = (2.0 / lam) ** D * (1 + lam / (2 * r0)) ** D * 2.0 ** (ell + 1)
    return const * (2 * ell + 2) / (2 * ell + 2 - D) * r0 ** (D - 2 * ell - 2)


def poincare_lift(space: HermitianSpace, lattice: LatticeSpec, t, ell: int, g: GroupElement,
                  R: float) -> LiftResult:
    """``sum B_{l,v}(g)`` over lattice vectors with ``<v, v> = t`` and ``||v g||^2 <= R``.

    Truncating by the majorant at the evaluation point keeps the partial sum exactly
    invariant under every ``n`` with ``Lambda n = Lambda``.
    """
    if ell <= space.n + 1:
        raise ValueError("the lattice sum converges only for l > n + 1")
    if Fraction(t) <= 0:
        raise ValueError("t must be positive")
    en = enumerate_norm(space, lattice, t, R, g)
    if len(en) == 0:
        coeffs = np.zeros(2 * ell + 1, dtype=complex)
    else:
        coeffs = a_ell_many(en.vectors @ g.mat, ell).sum(axis=0)
    return LiftResult(VellElement(ell, coeffs), epstein_tail(space, lattice, ell, g, R), len(en), en.complete)


def lift_function(space: HermitianSpace, lattice: LatticeSpec, t, ell: int, R: float) -> Callable:
    return lambda g: poincare_lift(space, lattice, t, ell, g, R).value


def lift_schmid_check(space: HermitianSpace, lattice: LatticeSpec, t, ell: int, g: GroupElement,
                      R: float, sign: str = "+") -> dict:
    """Finite-difference Schmid output on a fixed truncated sum versus the sum of per-term outputs."""
    en = enumerate_norm(space, lattice, t, R, g)
    vecs = en.vectors

    def fixed_sum(h):
        return VellElement(ell, a_ell_many(vecs @ h.mat, ell).sum(axis=0))

    total = schmid_apply(space, fixed_sum, ell, sign, g)
    per_term = 0.0
    for w in vecs:
        out = schmid_apply(space, lambda h, w=w: VellElement(ell, a_ell_many((w @ h.mat)[None, :], ell)[0]),
                           ell, sign, g)
        per_term += out.max_abs()
    return {"residual": total.max_abs(), "per_term": per_term,
            "tail": epstein_tail(space, lattice, ell, g, R), "terms": len(vecs)}


# -- Fourier extraction along N --

def _smooth_cutoff(x: np.ndarray, start: float = 0.5) -> np.ndarray:
    """C-infinity weight: 1 on ``x <= start``, 0 on ``x >= 1``."""
    y = np.clip((x - start) / (1 - start), 0.0, 1.0)
    out = np.ones_like(y)
    inner = (y > 0) & (y < 1)
    a = np.exp(-1 / y[inner])
    b = np.exp(-1 / (1 - y[inner]))
    out[inner] = b / (a + b)
    out[y >= 1] = 0.0
    return out


@dataclass(frozen=True)
class TorusGrid:
    points_v0: int = 6          # per real direction of V0
    points_centre: int = 6


def unipotent_periods(space: HermitianSpace, lattice: LatticeSpec):
    """Real generators of the V0-projection of ``N(Z)`` and the central period.

    Only the standard lattice is supported: ``x0`` must lie in ``O_E^n`` and,
    when ``O_E = Z[sqrt(-d)]``, have even hermitian norm; the centre is
    ``z(s)`` with ``s`` in ``sqrt(d) Z``.
    """
    if lattice != LatticeSpec.standard(space):
        raise ValueError("periods are derived only for the standard lattice")
    n, d = space.n, space.d
    omega = complex(integer_generator(d))
    gens = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1
        gens += [e, omega * e]
    G = np.array(gens)
    # for O_E = Z[sqrt(-d)] the b1-entry -<x0, x0>/2 of b2 . n must be integral
    basis = _reduce_even_sublattice(G) if d % 4 != 3 else G
    return np.array(basis), math.sqrt(d)


def _reduce_even_sublattice(G: np.ndarray) -> np.ndarray:
    """Basis of ``{sum c_i G_i : sum_k +-|x_k|^2 even}`` via the parity vector of the generators."""
    m = len(G)
    parity = np.array([int(round(abs(g[i // 2]) ** 2)) % 2 for i, g in enumerate(G)])
    # norm mod 2 is sum c_i parity_i: cross terms are even
    odd = [i for i in range(m) if parity[i] == 1]
    if not odd:
        return G
    pivot = odd[0]
    basis = [2 * G[pivot]]
    for i in range(m):
        if i == pivot:
            continue
        basis.append(G[i] + G[pivot] if parity[i] == 1 else G[i])
    return np.array(basis)


def dual_character(space: HermitianSpace, basis: np.ndarray, T) -> bool:
    """Whether ``eta_T`` is trivial on the period lattice (``Re <T, x0>`` integral)."""
    T = np.asarray(T, dtype=complex)
    v0 = space.arch_to_rat(T)[1:-1]
    gram = np.array([[complex(x) for x in row[1:-1]] for row in space.gram_rational[1:-1]])
    vals = [np.real(v0 @ gram @ np.conj(x)) for x in basis]
    return all(abs(v - round(v)) < 1e-9 for v in vals)


def lift_fourier_coeff(space: HermitianSpace, lattice: LatticeSpec, t, ell: int, Ts: Sequence,
                       g: GroupElement, R: float, grid: TorusGrid = TorusGrid(),
                       expensive: bool = False) -> np.ndarray:
    """Normalized ``int lift(n g) conj(eta_T(n)) dn`` over ``N(Z) \\ N`` for each ``T``.

    The lattice sum uses the smooth weight ``rho(||v n g||^2 / R)``, which keeps the
    integrand periodic and smooth so the torus trapezoid rule converges spectrally.
    Returns an array of shape (len(Ts), 2l+1).
    """
    if space.n > 1 and not expensive:
        raise ValueError("torus extraction for n > 1 requires expensive=True")
    if ell <= space.n + 1:
        raise ValueError("the lattice sum converges only for l > n + 1")
    basis, period = unipotent_periods(space, lattice)
    for T in Ts:
        if not dual_character(space, basis, T):
            raise ValueError("T does not define a character trivial on N(Z)")
    m_dirs = len(basis)
    axes = [np.arange(grid.points_v0) / grid.points_v0] * m_dirs + [np.arange(grid.points_centre) / grid.points_centre]
    Tarch = [np.asarray(T, dtype=complex) for T in Ts]
    acc = np.zeros((len(Ts), 2 * ell + 1), dtype=complex)
    count = 0
    for node in itertools.product(*axes):
        x0 = np.asarray(node[:-1]) @ basis
        x0a = _v0_to_arch(space, x0)
        ng = z_of(space, node[-1] * period) @ n_of(space, x0a) @ g
        w = enumerate_norm(space, lattice, t, R, ng).vectors @ ng.mat
        weight = _smooth_cutoff(np.sum(np.abs(w) ** 2, axis=1) / R)
        sel = weight > 0
        val = (a_ell_many(w[sel], ell) * weight[sel, None]).sum(axis=0) if sel.any() else 0.0
        for i, T in enumerate(Tarch):
            chi = np.exp(2j * np.pi * np.real(herm(space, T, x0a)))
            acc[i] += val * chi
        count += 1
    return acc / count


def _v0_to_arch(space: HermitianSpace, x0) -> np.ndarray:
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = x0
    return space.rat_to_arch(full)


# -- exact cyclotomic arithmetic --

def _poly_divmod(num: list, den: list):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] / den[-1]
        q[shift] = c
        for i, dc in enumerate(den):
            num[i + shift] -= c * dc
        num.pop()
    return q, num


def cyclotomic_polynomial(N: int) -> list:
    """Coefficients (constant first) of the N-th cyclotomic polynomial."""
    if N < 1:
        raise ValueError("conductor must be positive")
    poly = [Fraction(-1)] + [Fraction(0)] * (N - 1) + [Fraction(1)]
    for k in range(1, N):
        if N % k == 0:
            poly, _ = _poly_divmod(poly, cyclotomic_polynomial(k))
    return poly


_PHI_CACHE: dict = {}


def _phi(N: int) -> list:
    if N not in _PHI_CACHE:
        _PHI_CACHE[N] = cyclotomic_polynomial(N)
    return _PHI_CACHE[N]


class CyclotomicNumber:
    """Element of ``Q(zeta_N)``, stored reduced modulo the N-th cyclotomic polynomial."""
    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Iterable = ()):
        if not 1 <= N <= MAX_CONDUCTOR:
            raise OverflowError(f"conductor {N} outside 1..{MAX_CONDUCTOR}")
        self.N = int(N)
        raw = [Fraction(c) for c in coeffs]
        full = [Fraction(0)] * N
        for i, c in enumerate(raw):
            full[i % N] += c
        phi = _phi(N)
        _, rem = _poly_divmod(full, phi)
        deg = len(phi) - 1
        self.coeffs = tuple((rem + [Fraction(0)] * deg)[:deg])

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CyclotomicNumber":
        c = [0] * N
        c[k % N] = 1
        return cls(N, c)

    @classmethod
    def rational(cls, N: int, q) -> "CyclotomicNumber":
        return cls(N, [q])

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.N != self.N:
                raise ValueError("conductor mismatch")
            return other
        return CyclotomicNumber(self.N, [other])

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.N, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.N, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return CyclotomicNumber(self.N, prod)

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicNumber":
        c = [Fraction(0)] * self.N
        for i, a in enumerate(self.coeffs):
            c[(-i) % self.N] += a
        return CyclotomicNumber(self.N, c)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def __complex__(self):
        z = np.exp(2j * np.pi / self.N)
        return complex(sum(float(a) * z ** i for i, a in enumerate(self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> list:
        return [str(a) for a in self.coeffs]

    @classmethod
    def from_json(cls, N: int, data: Sequence) -> "CyclotomicNumber":
        return cls(N, [Fraction(x) for x in data])

    def __repr__(self):
        terms = [f"{a}*z^{i}" for i, a in enumerate(self.coeffs) if a]
        return f"CyclotomicNumber(N={self.N}: {' + '.join(terms) or '0'})"


@dataclass
class FinitePartProvider:
    """Rule ``(T, lattice) -> [(t_i, weight_i)]`` with finitely many terms."""
    rule: Callable
    max_support: int = 10_000

    def __call__(self, T, lattice):
        terms = self.rule(T, lattice)
        if not isinstance(terms, (list, tuple)):
            raise ValueError("provider must return a finite list of (t, weight) pairs")
        if len(terms) > self.max_support:
            raise ValueError("provider support exceeds the finite-support limit")
        return [(Fraction(t), w) for t, w in terms]


def indicator_provider(space: HermitianSpace, N: int = 8) -> FinitePartProvider:
    """Weight 1 at ``t = <T, T>`` when ``T`` lies in the standard lattice of ``V0``, else nothing."""
    def rule(T, lattice):
        T = SpaceVector.rational(T, space.d) if not isinstance(T, SpaceVector) else T
        coords = T.coords
        omega = integer_generator(space.d)
        for c in coords:
            # c = a + b omega with a, b integers
            b = c.y / omega.y
            a = c.x - b * omega.x
            if a.denominator != 1 or b.denominator != 1:
                return []
        norm = herm(space, T, T)
        return [(norm.x, CyclotomicNumber.rational(N, 1))]
    return FinitePartProvider(rule)


def algebraic_coeff(bf_table: dict, T, provider: FinitePartProvider, lattice=None,
                    N: int | None = None) -> CyclotomicNumber:
    """``sum_i c_i b_f(t_i)`` in exact cyclotomic arithmetic."""
    if not bf_table and N is None:
        raise ValueError("empty table needs an explicit conductor")
    table = {Fraction(k): v for k, v in bf_table.items()}
    N = N or next(iter(table.values())).N
    total = CyclotomicNumber(N, [])
    for t, w in provider(T, lattice):
        if t <= 0:
            raise ValueError("provider terms must have positive t")
        w = w if isinstance(w, CyclotomicNumber) else CyclotomicNumber.rational(N, w)
        if t in table:
            total = total + w * table[t]
    return total


def bf_table_from_json(data: dict, N: int = 8) -> dict:
    return {Fraction(k): CyclotomicNumber.from_json(N, v) for k, v in data.items()}
