"""Bilinear maps on a Gma, their traces, and the proper form z·x² + μ(x)·x + ν(x, x).

Only the symmetric part of a bilinear map is observable through its trace, so
solution spaces are parameterized by symmetric tensors.  Such a tensor is
flattened to a vector indexed by ``pair * d + t``, where ``pair`` enumerates
index pairs a <= b in lexicographic order and t is the output coordinate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import field
from .algebra import Algebra, LinearMap, center_basis
from .field import NoSolution, TooLarge
from .gma import DEFAULT_CAP, Gma, Verdict


@dataclass(frozen=True, eq=False)
class BilinearMap:
    """q(e_i, e_j) = tensor[i, j, :]."""

    tensor: np.ndarray
    p: int

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=np.int64)
        d = t.shape[0]
        if t.shape != (d, d, d):
            raise ValueError(f"bilinear tensor must have shape (d, d, d), got {t.shape}")
        object.__setattr__(self, "tensor", t % self.p)

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]

    def __call__(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.tensor) % self.p

    def symmetric_part(self) -> "BilinearMap":
        half = field.inv(2, self.p)
        return BilinearMap((self.tensor + self.tensor.transpose(1, 0, 2)) * half, self.p)

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        return BilinearMap(self.tensor + other.tensor, self.p)

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        return BilinearMap(self.tensor - other.tensor, self.p)

    def scale(self, c: int) -> "BilinearMap":
        return BilinearMap(self.tensor * int(c), self.p)


def evaluate_trace(q: BilinearMap, x) -> np.ndarray:
    return q(x, x)


def product_map(a: Algebra) -> BilinearMap:
    """q(x, y) = xy."""
    return BilinearMap(a.mult, a.p)


def left_product_map(a: Algebra, w) -> BilinearMap:
    """q(x, y) = w·x·y."""
    lw = a.left_matrix(w)  # columns: w·e_k
    return BilinearMap(np.einsum("ijl,kl->ijk", a.mult, lw) % a.p, a.p)


def _flat(g: Gma | Algebra) -> Algebra:
    return g.flat if isinstance(g, Gma) else g


@functools.lru_cache(maxsize=64)
def _center(g: Gma | Algebra) -> np.ndarray:
    """Center basis; trace functions accept a Gma or a bare algebra."""
    from .gma import gma_center

    return gma_center(g).center_basis if isinstance(g, Gma) else center_basis(g)


# -- symmetric coordinates -----------------------------------------------------

def pairs(d: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(d) for b in range(a, d)]


@functools.lru_cache(maxsize=64)
def _pair_index(d: int) -> np.ndarray:
    idx = np.zeros((d, d), dtype=np.int64)
    for r, (a, b) in enumerate(pairs(d)):
        idx[a, b] = idx[b, a] = r
    return idx


def sym_to_vector(q: BilinearMap) -> np.ndarray:
    s = q.symmetric_part().tensor
    iu = np.triu_indices(q.dim)
    return s[iu].reshape(-1)


def vector_to_sym(v, d: int, p: int) -> BilinearMap:
    v = np.asarray(v, dtype=np.int64).reshape(-1, d)
    return BilinearMap(v[_pair_index(d)], p)


# -- the cubic identity [T(x), x] (mod the center) ---------------------------

def _center_reducer(g: Gma) -> np.ndarray:
    """Matrix R with R·v = v reduced modulo Z(G); zero exactly on the center."""
    z = _center(g)
    d, p = g.dim, g.p
    red = np.eye(d, dtype=np.int64)
    if z.shape[0]:
        piv = field.pivots_of(z)
        red[:, piv] = (red[:, piv] - z.T) % p
    return red


def _output_map(g: Gma, kind: str) -> np.ndarray | None:
    if kind == "commuting":
        return None
    if kind == "centralizing":
        return _center_reducer(g)
    raise ValueError("kind must be 'commuting' or 'centralizing'")


def _triples(d: int) -> np.ndarray:
    return np.array([(i, j, k) for i in range(d) for j in range(i, d) for k in range(j, d)],
                    dtype=np.int64).reshape(-1, 3)


def _polarized_blocks(g: Gma, red: np.ndarray | None, chunk: int = 16) -> Iterator[np.ndarray]:
    """Rows (triple, s) of the symmetrized cubic [Q_ij,e_k]+[Q_ik,e_j]+[Q_jk,e_i] in the unknown Q."""
    a = _flat(g)
    d, p = a.dim, a.p
    P = d * (d + 1) // 2
    pidx = _pair_index(d)
    kt = a.bracket.transpose(1, 2, 0)  # kt[c, s, t] = [e_t, e_c]_s
    if red is not None:
        kt = np.einsum("us,cst->cut", red, kt) % p
    tri = _triples(d)
    for lo in range(0, tri.shape[0], chunk):
        t = tri[lo:lo + chunk]
        n = t.shape[0]
        blk = np.zeros((n, d, P, d), dtype=np.int64)
        r = np.arange(n)
        for (u, v, w) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            blk[r, :, pidx[t[:, u], t[:, v]], :] += kt[t[:, w]]
        yield blk.reshape(n * d, P * d) % p


def _enumeration_blocks(g: Gma, red: np.ndarray | None, cap: int) -> Iterator[np.ndarray]:
    """Rows (x, s) of [T(x), x]_s = 0 for every point x, as linear conditions on Q."""
    a = _flat(g)
    d, p = a.dim, a.p
    if p**d > cap:
        raise TooLarge(f"enumeration needs {p}^{d} points, cap is {cap}")
    iu = np.triu_indices(d)
    weight = np.where(iu[0] == iu[1], 1, 2)
    kt = a.bracket.transpose(1, 2, 0)
    if red is not None:
        kt = np.einsum("us,cst->cut", red, kt) % p
    for xs in field.vector_chunks(d, p, chunk=256):
        w = (xs[:, iu[0]] * xs[:, iu[1]] * weight) % p  # (n, P)
        lx = np.einsum("nc,cst->nst", xs, kt) % p  # (n, s, t)
        yield (np.einsum("nP,nst->nsPt", w, lx) % p).reshape(xs.shape[0] * d, -1)


def trace_space(g: Gma, kind: str = "commuting", cap: int = DEFAULT_CAP) -> list[BilinearMap]:
    """Canonical basis of symmetric q whose trace is commuting (or centralizing)."""
    vecs = trace_space_vectors(g, kind, cap)
    return [vector_to_sym(v, g.dim, g.p) for v in vecs]


def trace_space_vectors(g: Gma, kind: str = "commuting", cap: int = DEFAULT_CAP) -> np.ndarray:
    red = _output_map(g, kind)
    d = g.dim
    n = d * (d + 1) // 2 * d
    blocks = _polarized_blocks(g, red) if g.p >= 5 else _enumeration_blocks(g, red, cap)
    return field.nullspace(blocks, g.p, n=n)


def _cubic_coefficients(g: Gma, q: BilinearMap, red: np.ndarray | None) -> np.ndarray:
    """C[i, j, k] = symmetrized coefficient of x_i x_j x_k in [T(x), x] (optionally reduced)."""
    s = q.symmetric_part().tensor
    a = _flat(g)
    p = a.p
    # [S_ij, e_k]_u = Σ_t S_ij[t] K[t, k, u]
    br = np.einsum("ijt,tku->ijku", s, a.bracket) % p
    c = (br + br.transpose(0, 2, 1, 3) + br.transpose(2, 1, 0, 3)) % p
    if red is not None:
        c = np.einsum("us,ijks->ijku", red, c) % p
    return c


def _cubic_value(g: Gma, q: BilinearMap, red: np.ndarray | None, x) -> np.ndarray:
    t = q(x, x)
    v = _flat(g).commutator(t, x)
    return v if red is None else field.matmul(red, v, g.p)


def _check_trace(g: Gma, q: BilinearMap, kind: str, cap: int) -> Verdict:
    red = _output_map(g, kind)
    d, p = g.dim, g.p
    if p == 3:
        if p**d > cap:
            raise TooLarge(f"enumeration needs {p}^{d} points, cap is {cap}")
        for xs in field.vector_chunks(d, p, chunk=4096):
            t = np.einsum("ni,nj,ijk->nk", xs, xs, q.tensor) % p
            v = (_flat(g).mul_many(t, xs) - _flat(g).mul_many(xs, t)) % p
            if red is not None:
                v = field.matmul(v, red.T, p)
            bad = np.flatnonzero(v.any(axis=1))
            if bad.size:
                return Verdict(False, xs[bad[0]].copy())
        return Verdict(True)
    c = _cubic_coefficients(g, q, red)
    nz = np.argwhere(c.any(axis=-1))
    if nz.size == 0:
        return Verdict(True)
    # the cubic is a nonzero polynomial in the coordinates of its first nonzero
    # monomial, of degree < p in each; some point of that coordinate subspace sees it
    coords = sorted(set(int(i) for i in nz[0]))
    for pts in field.vector_chunks(len(coords), p):
        for pt in pts:
            x = np.zeros(d, dtype=np.int64)
            x[coords] = pt
            if _cubic_value(g, q, red, x).any():
                return Verdict(False, x)
    raise AssertionError("nonzero cubic form with no witness point")  # unreachable


def is_commuting_trace(g: Gma, q: BilinearMap, cap: int = DEFAULT_CAP) -> Verdict:
    """[T_q(x), x] = 0 for every x, else the first witness found."""
    return _check_trace(g, q, "commuting", cap)


def is_centralizing_trace(g: Gma, q: BilinearMap, cap: int = DEFAULT_CAP) -> Verdict:
    """[T_q(x), x] ∈ Z(G) for every x, else a witness."""
    return _check_trace(g, q, "centralizing", cap)


# -- proper form -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProperDecomposition:
    """T_q(x) = z·x² + μ(x)·x + ν(x, x) with z, μ, ν center-valued."""

    z: np.ndarray
    mu: LinearMap
    nu: BilinearMap

    def reconstruct(self, a: Algebra) -> BilinearMap:
        """The symmetric bilinear map polarizing z·x² + μ(x)·x + ν(x, x)."""
        p = a.p
        half = field.inv(2, p)
        c = a.mult
        lz = a.left_matrix(self.z)  # columns z·e_k
        zpart = np.einsum("ijl,kl->ijk", (c + c.transpose(1, 0, 2)) % p, lz) % p
        mu = self.mu.matrix  # columns μ(e_a)
        # μ(e_i)·e_j
        mpart = np.einsum("li,ljk->ijk", mu, c) % p
        mpart = (mpart + mpart.transpose(1, 0, 2)) % p
        return BilinearMap((zpart + mpart) * half + self.nu.tensor, p)

    def trace(self, a: Algebra, x) -> np.ndarray:
        x2 = a.mul(x, x)
        return (a.mul(self.z, x2) + a.mul(self.mu(x), x) + self.nu(x, x)) % a.p


@functools.lru_cache(maxsize=32)
def _properness_generators(g: Gma) -> np.ndarray:
    """Rows: symmetric vectors of the generators z_s, μ_(a0, s), ν_(pair, s).

    Unknown order: z coefficients (c), then μ at a0*c + s, then ν at pair*c + s,
    with the center basis indexed by s.
    """
    a = _flat(g)
    d, p = a.dim, a.p
    half = field.inv(2, p)
    zb = _center(g)
    c = zb.shape[0]
    iu = np.triu_indices(d)
    P = iu[0].shape[0]
    sym = (a.mult + a.mult.transpose(1, 0, 2)) % p  # e_a e_b + e_b e_a
    rows = []
    for s in range(c):
        lz = a.left_matrix(zb[s])
        t = np.einsum("ijl,kl->ijk", sym, lz) * half % p
        rows.append(t[iu].reshape(-1))
    for a0 in range(d):
        for s in range(c):
            zm = a.left_matrix(zb[s])  # columns zb_s·e_k
            t = np.zeros((d, d, d), dtype=np.int64)
            t[a0, :, :] += zm.T
            t[:, a0, :] += zm.T
            rows.append((t * half % p)[iu].reshape(-1))
    nu = np.zeros((P * c, P * d), dtype=np.int64)
    for r in range(P):
        for s in range(c):
            nu[r * c + s, r * d:(r + 1) * d] = zb[s]
    gen = np.vstack([np.array(rows, dtype=np.int64).reshape(-1, P * d), nu]) % p
    return gen


def properness_subspace(g: Gma) -> list[BilinearMap]:
    """Canonical basis of the symmetric maps whose trace has the proper form."""
    return [vector_to_sym(v, g.dim, g.p) for v in properness_basis(g)]


def properness_basis(g: Gma) -> np.ndarray:
    return field.span_basis(_properness_generators(g), g.p, g.dim * (g.dim + 1) // 2 * g.dim)


def proper_trace_decompose(g: Gma, q: BilinearMap) -> ProperDecomposition | None:
    """Canonical (z, μ, ν) for the trace of q, or None when the trace is not proper."""
    a = _flat(g)
    d, p = a.dim, a.p
    zb = _center(g)
    c = zb.shape[0]
    gen = _properness_generators(g)
    try:
        sol = field.solve_affine(gen.T, sym_to_vector(q), p)
    except NoSolution:
        return None
    x = sol.particular
    z = field.matmul(x[:c][None, :], zb, p)[0] if c else np.zeros(d, dtype=np.int64)
    mu_c = x[c:c + d * c].reshape(d, c)
    mu = field.matmul(mu_c, zb, p).T if c else np.zeros((d, d), dtype=np.int64)
    P = d * (d + 1) // 2
    nu_c = x[c + d * c:].reshape(P, c)
    nu_v = field.matmul(nu_c, zb, p) if c else np.zeros((P, d), dtype=np.int64)
    return ProperDecomposition(z, LinearMap(mu, p), vector_to_sym(nu_v, d, p))


def decomposition_residual(g: Gma, q: BilinearMap, dec: ProperDecomposition) -> np.ndarray:
    """Symmetric part of q minus the reconstruction; zero for a valid decomposition."""
    return (q.symmetric_part().tensor - dec.reconstruct(_flat(g)).tensor) % g.p


def is_proper_trace(g: Gma, q: BilinearMap) -> bool:
    return proper_trace_decompose(g, q) is not None
