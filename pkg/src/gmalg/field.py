"""Exact dense linear algebra over prime fields F_p, p odd.

Matrices and vectors are plain ``numpy.int64`` arrays holding residues in
``[0, p)``; the modulus travels as an explicit argument.  Every routine is
deterministic: pivots are chosen leftmost column first, topmost row first.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from typing import NamedTuple

import numpy as np

# float64 matmul is exact while every partial sum stays below 2**53
_FLOAT_EXACT = 2**53


class NoSolution(ValueError):
    """The affine system a·x = b is inconsistent."""


class TooLarge(RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    p = int(p)
    if p == 2 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    if p >= 2**25:
        raise ValueError(f"modulus {p} too large for exact int64 arithmetic")
    return p


def inv(x: int, p: int) -> int:
    return pow(int(x) % p, -1, p)


def asmat(m, p: int) -> np.ndarray:
    return np.asarray(m, dtype=np.int64) % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, exact."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    step = max(1, (_FLOAT_EXACT - 1) // ((p - 1) ** 2))
    out = None
    for lo in range(0, inner, step):
        hi = min(inner, lo + step)
        part = np.rint(a[..., lo:hi].astype(np.float64) @ b[lo:hi].astype(np.float64))
        part = part.astype(np.int64) % p
        out = part if out is None else (out + part) % p
    return out


class RrefResult(NamedTuple):
    matrix: np.ndarray
    pivots: list[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(m, p: int) -> RrefResult:
    """Reduced row echelon form over F_p with its pivot columns."""
    a = asmat(m, p).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * inv(lead, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return RrefResult(a, pivots)


def rank(m, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return rref(m, p).rank


def _free_kernel(red: RrefResult, ncols: int, p: int) -> np.ndarray:
    """Kernel basis as columns (ncols × k): one free variable set to 1 each."""
    piv = red.pivots
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    k = np.zeros((ncols, len(free)), dtype=np.int64)
    if free:
        k[free, np.arange(len(free))] = 1
        if piv:
            k[piv, :] = (-red.matrix[: len(piv)][:, free]) % p
    return k


def span_basis(vectors, p: int, n: int | None = None) -> np.ndarray:
    """Canonical basis (nonzero rows of the rref) of the span of ``vectors``."""
    v = np.asarray(vectors, dtype=np.int64)
    if v.size == 0:
        width = n if n is not None else (v.shape[-1] if v.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.int64)
    red = rref(v, p)
    return red.matrix[: red.rank].copy()


def _blocks(a, block_rows: int) -> Iterator[np.ndarray]:
    if isinstance(a, np.ndarray):
        for lo in range(0, a.shape[0], block_rows):
            yield a[lo : lo + block_rows]
    else:
        yield from a


def nullspace(a: np.ndarray | Iterable[np.ndarray], p: int, n: int | None = None,
              block_rows: int = 256) -> np.ndarray:
    """Canonical (rref) basis of {x : a·x = 0}, rows are basis vectors.

    ``a`` may be a matrix or an iterable of row blocks sharing ``n`` columns;
    blocks are folded in one at a time so the full system is never stored.
    """
    if isinstance(a, np.ndarray):
        n = a.shape[1]
    if n is None:
        raise ValueError("column count required for block input")
    basis = None  # columns span the current kernel; None means identity
    for block in _blocks(a, block_rows):
        block = np.asarray(block, dtype=np.int64) % p
        if block.shape[0] == 0:
            continue
        k = n if basis is None else basis.shape[1]
        if k == 0:
            break
        s = block if basis is None else matmul(block, basis, p)
        red = rref(s, p)
        if red.rank == 0:
            continue
        step = _free_kernel(red, k, p)
        if basis is None:
            basis = step
        else:
            pivset = set(red.pivots)
            free = [c for c in range(k) if c not in pivset]
            coeff = step[red.pivots, :]
            basis = (basis[:, free] + matmul(basis[:, red.pivots], coeff, p)) % p
    if basis is None:
        return np.eye(n, dtype=np.int64)
    if basis.shape[1] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return span_basis(basis.T, p)


class AffineSolution(NamedTuple):
    particular: np.ndarray
    kernel_basis: list[np.ndarray]


def solve_affine(a, b, p: int) -> AffineSolution:
    """Solve a·x = b; free coordinates of the particular solution are zero.

    Raises NoSolution when inconsistent.
    """
    a = asmat(a, p)
    b = asmat(b, p).reshape(-1)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError("a.rows must equal len(b)")
    n = a.shape[1]
    red = rref(np.hstack([a, b[:, None]]), p)
    if red.pivots and red.pivots[-1] == n:
        raise NoSolution("inconsistent system")
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(red.pivots):
        x[c] = red.matrix[r, n]
    core = RrefResult(red.matrix[:, :n], red.pivots)
    k = _free_kernel(core, n, p)
    return AffineSolution(x, [k[:, j].copy() for j in range(k.shape[1])])


def subspace_contains(basis, v, p: int) -> bool:
    v = asmat(v, p).reshape(-1)
    b = np.asarray(basis, dtype=np.int64).reshape(-1, v.shape[0]) % p
    if not v.any():
        return True
    if b.shape[0] == 0:
        return False
    return rank(np.vstack([b, v]), p) == rank(b, p)


def same_span(a, b, p: int, n: int) -> bool:
    return np.array_equal(span_basis(np.reshape(a, (-1, n)), p, n),
                          span_basis(np.reshape(b, (-1, n)), p, n))


def span_contains_all(basis, vectors, p: int, n: int) -> bool:
    vectors = np.reshape(np.asarray(vectors, dtype=np.int64), (-1, n))
    if vectors.shape[0] == 0:
        return True
    base = np.reshape(np.asarray(basis, dtype=np.int64), (-1, n))
    return rank(np.vstack([base, vectors]), p) == rank(base, p)


def rref_coords(basis: np.ndarray, pivots: list[int], v, p: int) -> np.ndarray | None:
    """Coordinates of ``v`` in an rref basis, or None when v is outside the span."""
    v = asmat(v, p).reshape(-1)
    c = v[pivots].copy()
    if basis.shape[0] and not np.array_equal(matmul(c[None, :], basis, p)[0], v):
        return None
    if basis.shape[0] == 0 and v.any():
        return None
    return c


def pivots_of(basis: np.ndarray) -> list[int]:
    """Pivot columns of a matrix already in rref."""
    return [int(np.flatnonzero(row)[0]) for row in basis]


def inverse(m, p: int) -> np.ndarray:
    m = asmat(m, p)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    red = rref(np.hstack([m, np.eye(n, dtype=np.int64)]), p)
    if red.pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red.matrix[:, n:].copy()


def encode(v, p: int) -> int:
    """Little-endian integer code of a vector: coordinate 0 varies fastest."""
    return sum(int(x) * p**i for i, x in enumerate(np.asarray(v).reshape(-1)))


def least_nonzero(basis, p: int, n: int) -> np.ndarray | None:
    """Smallest nonzero vector of span(basis) in little-endian order."""
    b = np.reshape(np.asarray(basis, dtype=np.int64), (-1, n)) % p
    if b.shape[0] == 0 or not b.any():
        return None
    red = span_basis(b[:, ::-1], p)
    return red[-1][::-1].copy()


def vector_chunks(dim: int, p: int, chunk: int = 1 << 15,
                  start: int = 0) -> Iterator[np.ndarray]:
    """All vectors of F_p^dim in little-endian order, in row blocks."""
    total = p**dim
    powers = p ** np.arange(dim, dtype=np.int64)
    for lo in range(start, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % p


def all_vectors(dim: int, p: int) -> np.ndarray:
    return next(vector_chunks(dim, p, chunk=max(1, p**dim)))
