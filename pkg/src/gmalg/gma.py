"""Morita contexts and the generalized matrix algebras [A M; N B] they define.

Flat coordinates of a Gma are ordered A, M, N, B.  Tensor conventions:

* ``M.left[i, m, k]``   a_i·u_m = Σ_k left[i, m, k] u_k
* ``M.right[m, j, k]``  u_m·b_j = Σ_k right[m, j, k] u_k
* ``N.left``/``N.right`` the same with B acting on the left and A on the right
* ``phi[m, n, k]``      Φ(u_m, v_n) = Σ_k phi[m, n, k] a_k
* ``psi[n, m, k]``      Ψ(v_n, u_m) = Σ_k psi[n, m, k] b_k
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from . import field
from .algebra import Algebra, Violation, _violations, center_basis, validate_algebra, change_basis
from .field import TooLarge

DEFAULT_CAP = 10**6


class NotInDomain(ValueError):
    """Element lies outside the domain of the transfer map φ."""


class NotIdempotent(ValueError):
    pass


class TrivialIdempotent(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Bimodule:
    """A (left, right)-bimodule of finite dimension."""

    left_alg: Algebra
    right_alg: Algebra
    dim: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        p = self.left_alg.p
        left = np.asarray(self.left, dtype=np.int64).reshape(self.left_alg.dim, self.dim, self.dim)
        right = np.asarray(self.right, dtype=np.int64).reshape(self.dim, self.right_alg.dim, self.dim)
        object.__setattr__(self, "left", left % p)
        object.__setattr__(self, "right", right % p)

    def act_left(self, a, u) -> np.ndarray:
        return np.einsum("i,m,imk->k", a, u, self.left) % self.left_alg.p

    def act_right(self, u, b) -> np.ndarray:
        return np.einsum("m,j,mjk->k", u, b, self.right) % self.left_alg.p


def zero_module(left_alg: Algebra, right_alg: Algebra) -> Bimodule:
    return Bimodule(left_alg, right_alg, 0,
                    np.zeros((left_alg.dim, 0, 0), dtype=np.int64),
                    np.zeros((0, right_alg.dim, 0), dtype=np.int64))


@dataclass(frozen=True, eq=False)
class MoritaContext:
    A: Algebra
    B: Algebra
    M: Bimodule  # (A, B)-bimodule
    N: Bimodule  # (B, A)-bimodule
    phi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        p = self.A.p
        if self.B.p != p:
            raise ValueError("corner algebras must share the modulus")
        dm, dn = self.M.dim, self.N.dim
        phi = np.asarray(self.phi, dtype=np.int64).reshape(dm, dn, self.A.dim)
        psi = np.asarray(self.psi, dtype=np.int64).reshape(dn, dm, self.B.dim)
        object.__setattr__(self, "phi", phi % p)
        object.__setattr__(self, "psi", psi % p)

    @property
    def p(self) -> int:
        return self.A.p


@dataclass(frozen=True, eq=False)
class Gma:
    """Generalized matrix algebra with its eagerly built flat algebra.

    ``embedding`` optionally records where the flat basis came from: row i holds
    the coordinates of flat basis vector i in some ambient algebra (Peirce or
    matrix-unit builders fill it in).
    """

    context: MoritaContext
    flat: Algebra
    embedding: np.ndarray | None = None
    meta: dict[str, Any] = dc_field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.context.p

    @property
    def dims(self) -> tuple[int, int, int, int]:
        c = self.context
        return c.A.dim, c.M.dim, c.N.dim, c.B.dim

    @property
    def dim(self) -> int:
        return self.flat.dim

    @property
    def slices(self) -> tuple[slice, slice, slice, slice]:
        da, dm, dn, db = self.dims
        o = np.cumsum([0, da, dm, dn, db])
        return tuple(slice(int(o[i]), int(o[i + 1])) for i in range(4))

    @property
    def is_triangular(self) -> bool:
        return self.context.N.dim == 0 or self.context.M.dim == 0

    def element(self, a=None, m=None, n=None, b=None) -> np.ndarray:
        x = np.zeros(self.dim, dtype=np.int64)
        for s, part in zip(self.slices, (a, m, n, b)):
            if part is not None:
                x[s] = part
        return x % self.p

    def split(self, x) -> tuple[np.ndarray, ...]:
        x = np.asarray(x)
        return tuple(x[..., s] for s in self.slices)

    def corner_embed(self, which: int, v) -> np.ndarray:
        """Place a corner vector (0=A, 1=M, 2=N, 3=B) into flat coordinates."""
        parts = [None] * 4
        parts[which] = v
        return self.element(*parts)


def assemble_flat(ctx: MoritaContext) -> Algebra:
    """[a m; n b][a' m'; n' b'] = [aa' + Φ(m,n'), am' + mb'; na' + bn', Ψ(n,m') + bb']."""
    A, B, M, N = ctx.A, ctx.B, ctx.M, ctx.N
    da, dm, dn, db = A.dim, M.dim, N.dim, B.dim
    d = da + dm + dn + db
    sa, sm, sn, sb = (slice(0, da), slice(da, da + dm), slice(da + dm, da + dm + dn),
                      slice(da + dm + dn, d))
    c = np.zeros((d, d, d), dtype=np.int64)
    c[sa, sa, sa] = A.mult
    c[sa, sm, sm] = M.left
    c[sm, sb, sm] = M.right
    c[sm, sn, sa] = ctx.phi
    c[sb, sn, sn] = N.left
    c[sn, sa, sn] = N.right
    c[sn, sm, sb] = ctx.psi
    c[sb, sb, sb] = B.mult
    unit = np.concatenate([A.unit, np.zeros(dm + dn, dtype=np.int64), B.unit])
    return Algebra(ctx.p, c, unit)


def make_gma(ctx: MoritaContext, embedding=None, meta=None) -> Gma:
    if ctx.M.dim == 0 and ctx.N.dim == 0:
        raise ValueError("at least one of M, N must be nonzero")
    return Gma(ctx, assemble_flat(ctx), embedding, dict(meta or {}))


def split_flat(alg: Algebra, dims: tuple[int, int, int, int]) -> MoritaContext:
    """Read a Morita context off a flat algebra whose basis is ordered A, M, N, B."""
    da, dm, dn, db = dims
    p = alg.p
    o = np.cumsum([0, da, dm, dn, db])
    sa, sm, sn, sb = (slice(int(o[i]), int(o[i + 1])) for i in range(4))
    c = alg.mult
    A = Algebra(p, c[sa, sa, sa], alg.unit[sa])
    B = Algebra(p, c[sb, sb, sb], alg.unit[sb])
    M = Bimodule(A, B, dm, c[sa, sm, sm], c[sm, sb, sm])
    N = Bimodule(B, A, dn, c[sb, sn, sn], c[sn, sa, sn])
    return MoritaContext(A, B, M, N, c[sm, sn, sa], c[sn, sm, sb])


# -- validation --------------------------------------------------------------

def validate_bimodule(mod: Bimodule, name: str = "M") -> list[Violation]:
    A, B, L, R = mod.left_alg, mod.right_alg, mod.left, mod.right
    p = A.p
    out: list[Violation] = []
    if mod.dim == 0:
        return out
    eye = np.eye(mod.dim, dtype=np.int64)
    lhs = np.einsum("ijl,lmk->ijmk", A.mult, L)
    rhs = np.einsum("jml,ilk->ijmk", L, L)
    out += _violations(f"{name} left module (aa')u = a(a'u)", (lhs - rhs) % p)
    out += _violations(f"{name} left unit", (np.einsum("i,imk->mk", A.unit, L) - eye) % p)
    lhs = np.einsum("ijl,mlk->mijk", B.mult, R)
    rhs = np.einsum("mil,ljk->mijk", R, R)
    out += _violations(f"{name} right module u(bb') = (ub)b'", (lhs - rhs) % p)
    out += _violations(f"{name} right unit", (np.einsum("j,mjk->mk", B.unit, R) - eye) % p)
    lhs = np.einsum("iml,ljk->imjk", L, R)
    rhs = np.einsum("mjl,ilk->imjk", R, L)
    out += _violations(f"{name} bimodule (au)b = a(ub)", (lhs - rhs) % p)
    return out


def validate_morita(ctx: MoritaContext) -> list[Violation]:
    """Every violated Morita-context axiom with its basis indices."""
    A, B, M, N, F, S = ctx.A, ctx.B, ctx.M, ctx.N, ctx.phi, ctx.psi
    p = ctx.p
    out: list[Violation] = []
    out += [Violation("A: " + v.axiom, v.index) for v in validate_algebra(A)]
    out += [Violation("B: " + v.axiom, v.index) for v in validate_algebra(B)]
    if M.left_alg is not A and not np.array_equal(M.left_alg.mult, A.mult):
        out.append(Violation("M left algebra is not A", ()))
    if N.left_alg is not B and not np.array_equal(N.left_alg.mult, B.mult):
        out.append(Violation("N left algebra is not B", ()))
    out += validate_bimodule(M, "M")
    out += validate_bimodule(N, "N")
    if M.dim == 0 and N.dim == 0:
        out.append(Violation("M and N both zero", ()))
    if M.dim and N.dim:
        checks = [
            ("Φ(am, n) = aΦ(m, n)",
             np.einsum("iml,lnk->imnk", M.left, F), np.einsum("mnl,ilk->imnk", F, A.mult)),
            ("Φ(m, na) = Φ(m, n)a",
             np.einsum("nil,mlk->mnik", N.right, F), np.einsum("mnl,lik->mnik", F, A.mult)),
            ("Φ(mb, n) = Φ(m, bn)",
             np.einsum("mjl,lnk->mjnk", M.right, F), np.einsum("jnl,mlk->mjnk", N.left, F)),
            ("Ψ(bn, m) = bΨ(n, m)",
             np.einsum("jnl,lmk->jnmk", N.left, S), np.einsum("nml,jlk->jnmk", S, B.mult)),
            ("Ψ(n, mb) = Ψ(n, m)b",
             np.einsum("mjl,nlk->nmjk", M.right, S), np.einsum("nml,ljk->nmjk", S, B.mult)),
            ("Ψ(na, m) = Ψ(n, am)",
             np.einsum("nil,lmk->nimk", N.right, S), np.einsum("iml,nlk->nimk", M.left, S)),
            ("Φ(m,n)m' = mΨ(n,m')",
             np.einsum("mnl,lqk->mnqk", F, M.left), np.einsum("nql,mlk->mnqk", S, M.right)),
            ("Ψ(n,m)n' = nΦ(m,n')",
             np.einsum("nml,lqk->nmqk", S, N.left), np.einsum("mql,nlk->nmqk", F, N.right)),
        ]
        for name, lhs, rhs in checks:
            out += _violations(name, (lhs - rhs) % p)
    return out


def validate_gma(g: Gma) -> list[Violation]:
    """Context axioms, flat algebra axioms, and flat/corner agreement."""
    out = validate_morita(g.context)
    out += [Violation("flat: " + v.axiom, v.index) for v in validate_algebra(g.flat)]
    if not np.array_equal(assemble_flat(g.context).mult, g.flat.mult):
        out.append(Violation("flat product disagrees with corner data", ()))
    return out


# -- builders ----------------------------------------------------------------

def _unit_gma(n: int, k: int, p: int, upper: bool, meta: dict) -> Gma:
    """Matrix-unit subalgebra of M_n split at k, as a Gma."""
    if not 0 < k < n:
        raise ValueError(f"split point k must satisfy 0 < k < n, got k={k}, n={n}")
    p = field.check_modulus(p)
    ok = (lambda i, j: i <= j) if upper else (lambda i, j: True)
    rows = [(i, j) for i in range(n) for j in range(n) if ok(i, j)]
    corner = [
        [u for u in rows if u[0] < k and u[1] < k],
        [u for u in rows if u[0] < k <= u[1]],
        [u for u in rows if u[1] < k <= u[0]],
        [u for u in rows if u[0] >= k and u[1] >= k],
    ]
    order = [u for part in corner for u in part]
    from .algebra import _from_units  # local: keeps the public surface small

    flat = _from_units(order, n, p)
    ctx = split_flat(flat, tuple(len(c) for c in corner))
    # embedding into row-major coordinates of M_n (or T_n)
    index = {u: i for i, u in enumerate(rows)}
    emb = np.zeros((len(order), len(rows)), dtype=np.int64)
    for i, u in enumerate(order):
        emb[i, index[u]] = 1
    meta = dict(meta, units=[list(u) for u in order])
    return make_gma(ctx, emb, meta)


def build_block_partition(n: int, k: int, p: int) -> Gma:
    """M_n(F_p) as [M_k, M_{k×(n−k)}; M_{(n−k)×k}, M_{n−k}]."""
    return _unit_gma(n, k, p, upper=False, meta={"name": f"full {n} {k} {p}"})


def build_upper_triangular(n: int, p: int, k: int = 1) -> Gma:
    """T_n(F_p) split as [T_k, M_{k×(n−k)}; 0, T_{n−k}]."""
    return _unit_gma(n, k, p, upper=True, meta={"name": f"triangular {n} {p}"})


def build_triangular(a: Algebra, m: Bimodule, b: Algebra) -> Gma:
    """[A M; 0 B] with zero pairings."""
    if m.dim == 0:
        raise ValueError("at least one of M, N must be nonzero")
    bad = validate_bimodule(m, "M")
    if bad:
        raise ValueError(f"M is not an (A, B)-bimodule: {bad[0]}")
    ctx = MoritaContext(a, b, m, zero_module(b, a),
                        np.zeros((m.dim, 0, a.dim), dtype=np.int64),
                        np.zeros((0, m.dim, b.dim), dtype=np.int64))
    return make_gma(ctx)


def build_from_idempotent(a: Algebra, e) -> Gma:
    """Peirce decomposition [eAe eAf; fAe fAf], f = 1 − e.

    Corner bases are the rref bases of the images of x ↦ exe, exf, fxe, fxf;
    ``embedding`` holds the stacked corner bases (the Peirce coordinate change).
    """
    p = a.p
    e = np.asarray(e, dtype=np.int64) % p
    if not np.array_equal(a.mul(e, e), e):
        raise NotIdempotent("e·e ≠ e")
    if not e.any() or np.array_equal(e, a.unit):
        raise TrivialIdempotent("idempotent must differ from 0 and 1")
    f = (a.unit - e) % p
    le, lf = a.left_matrix(e), a.left_matrix(f)
    re_, rf = a.right_matrix(e), a.right_matrix(f)
    bases = []
    for left, right in ((le, re_), (le, rf), (lf, re_), (lf, rf)):
        image = field.matmul(left, right, p)  # columns: images of x ↦ (left)(x)(right)
        bases.append(field.span_basis(image.T, p, a.dim))
    w = np.vstack(bases)
    flat = change_basis(a, w)
    ctx = split_flat(flat, tuple(b.shape[0] for b in bases))
    return make_gma(ctx, w, {"name": "peirce"})


# -- center and the transfer map φ ---------------------------------------------

@dataclass(frozen=True, eq=False)
class CenterData:
    """Z(G) with its corner projections and φ: π_A(Z(G)) → π_B(Z(G))."""

    center_basis: np.ndarray  # rows, flat coordinates
    piA_basis: np.ndarray  # rref rows, A coordinates
    piB_basis: np.ndarray
    phi: np.ndarray  # column r = φ(piA_basis[r]) in B coordinates
    phi_inv: np.ndarray  # column s = φ⁻¹(piB_basis[s]) in A coordinates
    well_defined: bool  # φ single-valued (holds whenever M is right faithful)
    p: int

    @property
    def dim(self) -> int:
        return self.center_basis.shape[0]


def _central_constraints(g: Gma) -> np.ndarray:
    """Linear conditions on (a, b) for diag(a, b) to be central."""
    ctx = g.context
    A, B, M, N = ctx.A, ctx.B, ctx.M, ctx.N
    da, db, dm, dn = A.dim, B.dim, M.dim, N.dim
    p = g.p
    rows = []
    # a ∈ Z(A), b ∈ Z(B)
    ka = A.bracket.transpose(1, 2, 0).reshape(da * da, da)
    rows.append(np.hstack([ka, np.zeros((da * da, db), dtype=np.int64)]))
    kb = B.bracket.transpose(1, 2, 0).reshape(db * db, db)
    rows.append(np.hstack([np.zeros((db * db, da), dtype=np.int64), kb]))
    if dm:
        # a·u_m − u_m·b = 0: rows (m, k)
        la = M.left.transpose(1, 2, 0).reshape(dm * dm, da)
        rb = M.right.transpose(0, 2, 1).reshape(dm * dm, db)
        rows.append(np.hstack([la, -rb]))
    if dn:
        # v_n·a − b·v_n = 0
        ra = N.right.transpose(0, 2, 1).reshape(dn * dn, da)
        lb = N.left.transpose(1, 2, 0).reshape(dn * dn, db)
        rows.append(np.hstack([ra, -lb]))
    return np.vstack(rows) % p


@functools.lru_cache(maxsize=64)
def gma_center(g: Gma) -> CenterData:
    p = g.p
    da, dm, dn, db = g.dims
    sol = field.nullspace(_central_constraints(g), p)  # rows (a, b)
    c = sol.shape[0]
    flat = np.zeros((c, g.dim), dtype=np.int64)
    flat[:, :da] = sol[:, :da]
    flat[:, da + dm + dn:] = sol[:, da:]
    za, zb = sol[:, :da], sol[:, da:]
    piA = field.span_basis(za, p, da)
    piB = field.span_basis(zb, p, db)
    phi, ok_f = _transfer(za, zb, piA, p)
    phi_inv, ok_b = _transfer(zb, za, piB, p)
    return CenterData(flat, piA, piB, phi, phi_inv, ok_f and ok_b, p)


def _transfer(src: np.ndarray, dst: np.ndarray, basis: np.ndarray, p: int):
    """Columns: for each basis vector s of span(src), the dst-part of a central element with src-part s."""
    out = np.zeros((dst.shape[1], basis.shape[0]), dtype=np.int64)
    single = True
    for r, v in enumerate(basis):
        sol = field.solve_affine(src.T, v, p)
        out[:, r] = field.matmul(sol.particular[None, :], dst, p)[0]
        for k in sol.kernel_basis:
            if field.matmul(k[None, :], dst, p).any():
                single = False
    return out, single


def phi_apply(c: CenterData, a) -> np.ndarray:
    """φ(a): the unique b with diag(a, b) central."""
    coords = field.rref_coords(c.piA_basis, field.pivots_of(c.piA_basis), a, c.p)
    if coords is None:
        raise NotInDomain("element is not in π_A(Z(G))")
    return field.matmul(c.phi, coords, c.p)


def phi_inverse_apply(c: CenterData, b) -> np.ndarray:
    coords = field.rref_coords(c.piB_basis, field.pivots_of(c.piB_basis), b, c.p)
    if coords is None:
        raise NotInDomain("element is not in π_B(Z(G))")
    return field.matmul(c.phi_inv, coords, c.p)


# -- faithfulness and loyalty ------------------------------------------------

@dataclass
class Verdict:
    """Outcome of a yes/no check; ``witness`` explains a failure (or a success)."""

    holds: bool
    witness: Any = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def check_module_faithful(g: Gma, side: str) -> Verdict:
    """Left: {a : a·M = 0} = 0.  Right: {b : M·b = 0} = 0."""
    M, p = g.context.M, g.p
    if side == "left":
        act = M.left.transpose(1, 2, 0).reshape(M.dim * M.dim, M.left_alg.dim)
        n = M.left_alg.dim
    elif side == "right":
        act = M.right.transpose(0, 2, 1).reshape(M.dim * M.dim, M.right_alg.dim)
        n = M.right_alg.dim
    else:
        raise ValueError("side must be 'left' or 'right'")
    ker = field.nullspace(act, p) if act.shape[0] else np.eye(n, dtype=np.int64)
    w = field.least_nonzero(ker, p, n)
    return Verdict(True) if w is None else Verdict(False, w)


def check_loyal(g: Gma, cap: int = DEFAULT_CAP) -> Verdict:
    """aMb = 0 forces a = 0 or b = 0; otherwise the least annihilating pair.

    Pairs are ordered by a, then b, each in little-endian order.  For fixed a
    the admissible b form a subspace, so only a is enumerated.
    """
    M, p = g.context.M, g.p
    da, db, dm = M.left_alg.dim, M.right_alg.dim, M.dim
    if p ** (da + db) > cap:
        raise TooLarge(f"loyalty search needs {p}^{da + db} pairs, cap is {cap}")
    R = M.right
    for chunk in field.vector_chunks(da, p, chunk=4096):
        for a in chunk:
            if not a.any():
                continue
            y = np.einsum("i,imk->mk", a, M.left) % p  # rows: a·u_m
            cons = np.einsum("ml,ljk->mkj", y, R).reshape(dm * dm, db) % p
            ker = field.nullspace(cons, p) if cons.shape[0] else np.eye(db, dtype=np.int64)
            b = field.least_nonzero(ker, p, db)
            if b is not None:
                return Verdict(False, (a.copy(), b))
    return Verdict(True)
