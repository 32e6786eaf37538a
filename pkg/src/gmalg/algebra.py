"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import field
from .field import NoSolution


class Violation(NamedTuple):
    axiom: str
    index: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} at {self.index}"


def _violations(name: str, diff: np.ndarray) -> list[Violation]:
    """One violation per index tuple whose trailing coordinate vector is nonzero."""
    bad = np.argwhere(diff.reshape(diff.shape[:-1] + (-1,)).any(axis=-1))
    return [Violation(name, tuple(int(i) for i in row)) for row in bad]


@dataclass(frozen=True, eq=False)
class Algebra:
    """e_i·e_j = Σ_k mult[i, j, k]·e_k over F_p."""

    p: int
    mult: np.ndarray
    unit: np.ndarray

    def __post_init__(self):
        p = field.check_modulus(self.p)
        mult = np.asarray(self.mult, dtype=np.int64)
        d = mult.shape[0] if mult.ndim == 3 else -1
        if mult.ndim != 3 or mult.shape != (d, d, d):
            raise ValueError(f"structure constants must have shape (d, d, d), got {mult.shape}")
        unit = np.asarray(self.unit, dtype=np.int64).reshape(-1)
        if unit.shape != (d,):
            raise ValueError(f"unit must have length {d}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "mult", mult % p)
        object.__setattr__(self, "unit", unit % p)

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def mul(self, x, y) -> np.ndarray:
        return alg_mul(self, x, y)

    def mul_many(self, xs, ys) -> np.ndarray:
        """Row-wise products of two stacks of vectors."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        t = field.matmul(xs, self.mult.reshape(self.dim, -1), self.p)
        t = t.reshape(xs.shape[0], self.dim, self.dim)
        return np.einsum("nj,njk->nk", ys, t) % self.p

    def commutator(self, x, y) -> np.ndarray:
        return (self.mul(x, y) - self.mul(y, x)) % self.p

    @property
    def bracket(self) -> np.ndarray:
        """K[i, j, :] = coordinates of [e_i, e_j]."""
        return (self.mult - self.mult.transpose(1, 0, 2)) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y ↦ x·y (columns are images of basis vectors)."""
        x = np.asarray(x, dtype=np.int64)
        return (np.einsum("i,ijk->kj", x, self.mult) % self.p)

    def right_matrix(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (np.einsum("j,ijk->ki", x, self.mult) % self.p)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def is_commutative(self) -> bool:
        return not self.bracket.any()


def alg_mul(a: Algebra, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    return np.einsum("i,j,ijk->k", x, y, a.mult) % a.p


def validate_algebra(a: Algebra) -> list[Violation]:
    """Every failing associativity triple and unit-law index; empty when valid."""
    c, p, d = a.mult, a.p, a.dim
    left = np.einsum("ijl,lkm->ijkm", c, c) % p  # (e_i e_j) e_k
    right = np.einsum("jkl,ilm->ijkm", c, c) % p  # e_i (e_j e_k)
    out = _violations("associativity", (left - right) % p)
    eye = np.eye(d, dtype=np.int64)
    out += _violations("left unit", (np.einsum("i,ijk->jk", a.unit, c) - eye) % p)
    out += _violations("right unit", (np.einsum("i,jik->jk", a.unit, c) - eye) % p)
    return out


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear map between coordinate spaces; column j is the image of e_j."""

    matrix: np.ndarray
    p: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.int64) % self.p)
        if self.matrix.ndim != 2:
            raise ValueError("linear map matrix must be 2-d")

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> np.ndarray:
        return field.matmul(self.matrix, np.asarray(x, dtype=np.int64), self.p)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix + other.matrix, self.p)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix - other.matrix, self.p)

    def __neg__(self) -> "LinearMap":
        return LinearMap(-self.matrix, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None


def identity_map(d: int, p: int) -> LinearMap:
    return LinearMap(np.eye(d, dtype=np.int64), p)


def center_basis(a: Algebra) -> np.ndarray:
    """Canonical basis of Z(A), one vector per row."""
    d = a.dim
    # rows (i, s), columns t: Σ_t z_t [e_t, e_i]_s = 0
    cons = a.bracket.transpose(1, 2, 0).reshape(d * d, d)
    return field.nullspace(cons, a.p)


def _commuting_constraints(a: Algebra) -> np.ndarray:
    """Polarized [f(e_i), e_j] + [f(e_j), e_i] = 0, unknown f[t, i] at column i*d + t."""
    d, K = a.dim, a.bracket
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    cons = np.zeros((len(pairs), d, d, d), dtype=np.int64)  # (pair, s, i, t)
    for r, (i, j) in enumerate(pairs):
        cons[r, :, i, :] += K[:, j, :].T
        if i != j:
            cons[r, :, j, :] += K[:, i, :].T
    return cons.reshape(len(pairs) * d, d * d) % a.p


def commuting_linear_map_space(a: Algebra) -> list[LinearMap]:
    """Basis of {f : [f(x), x] = 0 for all x}, canonical in column-major coordinates."""
    d = a.dim
    basis = field.nullspace(_commuting_constraints(a), a.p)
    return [LinearMap(v.reshape(d, d).T, a.p) for v in basis]


def is_commuting_map(a: Algebra, f: LinearMap) -> bool:
    vec = f.matrix.T.reshape(-1)
    return not field.matmul(_commuting_constraints(a), vec, a.p).any()


@dataclass(frozen=True, eq=False)
class ProperLinearWitness:
    """f(x) = z·x + eta(x) with z central and eta center-valued."""

    z: np.ndarray
    eta: LinearMap

    def reconstruct(self, a: Algebra) -> LinearMap:
        return LinearMap(a.left_matrix(self.z) + self.eta.matrix, a.p)


def proper_linear_decompose(a: Algebra, f: LinearMap) -> ProperLinearWitness | None:
    """Canonical (z, eta) with f = z·id + eta, or None when f is not proper."""
    d, p = a.dim, a.p
    zb = center_basis(a)
    c = zb.shape[0]
    # unknowns: z coefficients (c), then eta[i, s] at c + i*c + s
    cols = np.zeros((d, d, c + d * c), dtype=np.int64)  # (i, k, unknown)
    for s in range(c):
        cols[:, :, s] = a.left_matrix(zb[s]).T  # (z_s e_i)_k
        for i in range(d):
            cols[i, :, c + i * c + s] = zb[s]
    try:
        sol = field.solve_affine(cols.reshape(d * d, -1), f.matrix.T.reshape(-1), p)
    except NoSolution:
        return None
    x = sol.particular
    z = field.matmul(x[:c][None, :], zb, p)[0] if c else np.zeros(d, dtype=np.int64)
    eta_coeff = x[c:].reshape(d, c)
    eta = field.matmul(eta_coeff, zb, p).T if c else np.zeros((d, d), dtype=np.int64)
    return ProperLinearWitness(z, LinearMap(eta, p))


# -- standard algebras -------------------------------------------------------

def _from_units(units: list[tuple[int, int]], n: int, p: int) -> Algebra:
    """Subalgebra of M_n spanned by the listed matrix units, in the given order."""
    index = {u: i for i, u in enumerate(units)}
    d = len(units)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), x in index.items():
        for (k, l), y in index.items():
            if j == k:
                mult[x, y, index[(i, l)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    for i in range(n):
        unit[index[(i, i)]] = 1
    return Algebra(p, mult, unit)


def matrix_units(n: int, upper: bool = False) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if not upper or i <= j]


def matrix_algebra(n: int, p: int) -> Algebra:
    """M_n(F_p) with row-major matrix-unit basis."""
    return _from_units(matrix_units(n), n, p)


def upper_triangular_algebra(n: int, p: int) -> Algebra:
    """T_n(F_p) with row-major basis of the units e_ij, i <= j."""
    return _from_units(matrix_units(n, upper=True), n, p)


def diagonal_algebra(k: int, p: int) -> Algebra:
    """F_p^k with coordinatewise product."""
    mult = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        mult[i, i, i] = 1
    return Algebra(p, mult, np.ones(k, dtype=np.int64))


def field_algebra(p: int) -> Algebra:
    return diagonal_algebra(1, p)


def change_basis(a: Algebra, w: np.ndarray) -> Algebra:
    """The same algebra in the basis given by the rows of the invertible ``w``."""
    p = a.p
    w = np.asarray(w, dtype=np.int64) % p
    winv = field.inverse(w, p)
    d = a.dim
    prods = np.einsum("ai,bj,ijk->abk", w, w, a.mult) % p
    mult = field.matmul(prods.reshape(d * d, d), winv, p).reshape(d, d, d)
    unit = field.matmul(a.unit[None, :], winv, p)[0]
    return Algebra(p, mult, unit)
