"""Corner components of a trace on [A M; N B] and the constructive proper form.

Write x = [a1 a2; a3 a4] with a1 ∈ A, a2 ∈ M, a3 ∈ N, a4 ∈ B.  The trace of a
symmetric q splits as

    T_q(x) = [F  G; H  K],   F = Σ_{i<=j} f_ij(a_i, a_j),  likewise G, H, K,

with f_ii(u, v) = π_A q(u, v) and f_ij(u, v) = 2·π_A q(u, v) for i < j.
Components are stored as tensors of shape (dim_i, dim_j, dim_corner), keyed by
1-based block indices (i, j).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import field
from .algebra import LinearMap, center_basis, proper_linear_decompose
from .gma import CenterData, Gma, gma_center
from .traces import BilinearMap, ProperDecomposition, is_commuting_trace

BLOCKS = (1, 2, 3, 4)
KEYS = tuple((i, j) for i in BLOCKS for j in BLOCKS if i <= j)


class RequiresCommuting(ValueError):
    """Derived block data exist only for commuting traces (and a well-behaved φ)."""


@dataclass(frozen=True, eq=False)
class Derived:
    alpha: np.ndarray  # (dA, dM): column m = α(u_m)
    tau: np.ndarray  # (dA, dN)
    gamma: np.ndarray  # (dA, dB): column s = γ(b_s)
    gamma_p: np.ndarray  # (dB, dA): column i = γ'(a_i)
    delta: np.ndarray  # (dA, dB, dA): δ(a_i, b_s)
    epsilon: np.ndarray  # in A
    epsilon_p: np.ndarray  # in B
    zeta: np.ndarray  # in B
    theta: np.ndarray  # in A


@dataclass(frozen=True, eq=False)
class BlockComponents:
    f: dict
    g: dict
    h: dict
    k: dict
    derived: Derived | None = None

    def component(self, name: str, i: int, j: int) -> np.ndarray:
        return getattr(self, name)[(i, j)]


def raw_components(g: Gma, q: BilinearMap) -> BlockComponents:
    """All f_ij, g_ij, h_ij, k_ij; always succeeds."""
    s = q.symmetric_part().tensor
    p = g.p
    sl = dict(zip(BLOCKS, g.slices))
    out = {name: {} for name in "fghk"}
    for i, j in KEYS:
        blk = s[sl[i], sl[j], :] * (1 if i == j else 2) % p
        for name, corner in zip("fghk", (1, 2, 3, 4)):
            out[name][(i, j)] = blk[:, :, sl[corner]]
    return BlockComponents(out["f"], out["g"], out["h"], out["k"])


# -- φ on stacks of vectors ---------------------------------------------------------

def _phi_many(c: CenterData, vecs: np.ndarray, inverse: bool = False) -> np.ndarray | None:
    """φ (or φ⁻¹) applied row-wise; None when some row lies outside the domain."""
    basis = c.piB_basis if inverse else c.piA_basis
    table = c.phi_inv if inverse else c.phi
    vecs = np.asarray(vecs, dtype=np.int64) % c.p
    shape = vecs.shape
    v = vecs.reshape(-1, shape[-1])
    if basis.shape[0] == 0:
        return None if v.any() else np.zeros(shape[:-1] + (table.shape[0],), dtype=np.int64)
    coords = v[:, field.pivots_of(basis)]
    if not np.array_equal(field.matmul(coords, basis, c.p), v):
        return None
    return field.matmul(coords, table.T, c.p).reshape(shape[:-1] + (table.shape[0],))


def _need(x):
    if x is None:
        raise RequiresCommuting("a value expected in the domain of φ lies outside it")
    return x


def block_components(g: Gma, q: BilinearMap, check: bool = True) -> BlockComponents:
    """Raw components plus α, τ, γ, γ', δ, ε, ε', ζ, θ.

    Raises RequiresCommuting when the trace is not commuting or a value that
    must lie in the domain of φ (or φ⁻¹) does not.
    """
    if check and not is_commuting_trace(g, q):
        raise RequiresCommuting("trace is not commuting")
    raw = raw_components(g, q)
    ctx, p = g.context, g.p
    A, B = ctx.A, ctx.B
    c = gma_center(g)
    one_a, one_b = A.unit, B.unit
    f, k = raw.f, raw.k

    def contract_first(t, v):  # t(v, ·) as rows
        return np.einsum("i,ijk->jk", v, t) % p

    f12_1, k12_1 = contract_first(f[(1, 2)], one_a), contract_first(k[(1, 2)], one_a)
    alpha = (f12_1 - _need(_phi_many(c, k12_1, inverse=True))) % p
    f13_1, k13_1 = contract_first(f[(1, 3)], one_a), contract_first(k[(1, 3)], one_a)
    tau = (f13_1 - _need(_phi_many(c, k13_1, inverse=True))) % p

    da, db = A.dim, B.dim
    gamma = np.zeros((da, db), dtype=np.int64)
    delta = np.zeros((da, db, da), dtype=np.int64)
    for s in range(db):
        w = proper_linear_decompose(A, LinearMap(f[(1, 4)][:, s, :].T, p))
        if w is None:
            raise RequiresCommuting(f"a1 ↦ f14(a1, b_{s}) is not a proper linear map")
        gamma[:, s] = w.z
        delta[:, s, :] = w.eta.matrix.T
    delta_1 = np.einsum("isk,s->ik", delta, one_b) % p
    k14_1 = np.einsum("isk,s->ik", k[(1, 4)], one_b) % p
    gamma_p = (k14_1 - _need(_phi_many(c, delta_1))) % p

    f11 = np.einsum("i,j,ijk->k", one_a, one_a, f[(1, 1)]) % p
    k11 = np.einsum("i,j,ijk->k", one_a, one_a, k[(1, 1)]) % p
    zeta = (_need(_phi_many(c, f11[None]))[0] - k11) % p
    k44 = np.einsum("i,j,ijk->k", one_b, one_b, k[(4, 4)]) % p
    f44 = np.einsum("i,j,ijk->k", one_b, one_b, f[(4, 4)]) % p
    theta = (_need(_phi_many(c, k44[None], inverse=True))[0] - f44) % p
    epsilon = (theta - gamma @ one_b) % p
    epsilon_p = (zeta - one_a @ gamma_p) % p
    d = Derived(alpha.T % p, tau.T % p, gamma, gamma_p.T % p, delta,
                epsilon, epsilon_p, zeta, theta)
    return BlockComponents(raw.f, raw.g, raw.h, raw.k, d)


# -- relations the components satisfy for commuting traces ----------------------

def _in_span(basis: np.ndarray, vecs: np.ndarray, p: int) -> bool:
    n = basis.shape[1] if basis.ndim == 2 and basis.shape[0] else vecs.shape[-1]
    v = vecs.reshape(-1, vecs.shape[-1]) if vecs.size else np.zeros((0, n), dtype=np.int64)
    return field.span_contains_all(basis.reshape(-1, n), v, p, n)


def _eq(lhs, rhs, p: int) -> bool:
    if lhs is None or rhs is None:
        return False
    return not ((np.asarray(lhs) - np.asarray(rhs)) % p).any()


def lemma_checks(g: Gma, bc: BlockComponents) -> dict[str, bool]:
    """Each structural relation of a commuting trace, evaluated on basis tuples."""
    if bc.derived is None:
        raise RequiresCommuting("derived data missing; use block_components")
    ctx, p = g.context, g.p
    A, B, M, N = ctx.A, ctx.B, ctx.M, ctx.N
    cA, cB = A.mult, B.mult
    c = gma_center(g)
    dv = bc.derived
    f, gg, h, k = bc.f, bc.g, bc.h, bc.k
    half = field.inv(2, p)
    zA, zB = center_basis(A), center_basis(B)
    out: dict[str, bool] = {}

    out["h11,h12,h14,h22,h24,h44 vanish"] = not any(
        h[key].any() for key in ((1, 1), (1, 2), (1, 4), (2, 2), (2, 4), (4, 4)))
    out["g11,g13,g14,g33,g34,g44 vanish"] = not any(
        gg[key].any() for key in ((1, 1), (1, 3), (1, 4), (3, 3), (3, 4), (4, 4)))
    out["f22,f24,f33,f34,f44 map into Z(A)"] = all(
        _in_span(zA, f[key], p) for key in ((2, 2), (2, 4), (3, 3), (3, 4), (4, 4)))
    out["k11,k12,k13,k22,k33 map into Z(B)"] = all(
        _in_span(zB, k[key], p) for key in ((1, 1), (1, 2), (1, 3), (2, 2), (3, 3)))

    def diag_central(fa, kb) -> bool:
        fa, kb = fa.reshape(-1, A.dim), kb.reshape(-1, B.dim)
        flat = np.zeros((fa.shape[0], g.dim), dtype=np.int64)
        flat[:, g.slices[0]] = fa
        flat[:, g.slices[3]] = kb
        return _in_span(c.center_basis, flat, p)

    out["diag(f22, k22) central"] = diag_central(f[(2, 2)], k[(2, 2)])
    out["diag(f33, k33) central"] = diag_central(f[(3, 3)], k[(3, 3)])

    phi = lambda v: _phi_many(c, v)  # noqa: E731
    phinv = lambda v: _phi_many(c, v, inverse=True)  # noqa: E731

    def plus(*terms):
        if any(t is None for t in terms):
            return None
        return sum(terms) % p

    # f12(a1, a2) = α(a2)a1 + φ⁻¹(k12(a1, a2))
    alpha_a1 = np.einsum("ml,lik->imk", dv.alpha.T, cA) % p
    out["f12 = α(a2)a1 + φ⁻¹(k12)"] = _eq(f[(1, 2)], plus(alpha_a1, phinv(k[(1, 2)])), p)
    pa = phi(dv.alpha.T)
    rhs = None if pa is None else np.einsum("ml,ljk->mjk", pa, cB) % p
    out["k24 = φ(α(a2))a4 + φ(f24)"] = _eq(k[(2, 4)], plus(rhs, phi(f[(2, 4)])), p)
    tau_a1 = np.einsum("nl,lik->ink", dv.tau.T, cA) % p
    out["f13 = τ(a3)a1 + φ⁻¹(k13)"] = _eq(f[(1, 3)], plus(tau_a1, phinv(k[(1, 3)])), p)
    pt = phi(dv.tau.T)
    rhs = None if pt is None else np.einsum("nl,ljk->njk", pt, cB) % p
    out["k34 = φ(τ(a3))a4 + φ(f34)"] = _eq(k[(3, 4)], plus(rhs, phi(f[(3, 4)])), p)

    # f14(a1, a4) = γ(a4)a1 + δ(a1, a4);  k14(a1, a4) = γ'(a1)a4 + φ(δ(a1, a4))
    gam_a1 = np.einsum("sl,lik->isk", dv.gamma.T, cA) % p
    out["f14 = γ(a4)a1 + δ"] = (_eq(f[(1, 4)], (gam_a1 + dv.delta) % p, p)
                                 and _in_span(zA, dv.delta, p) and _in_span(zA, dv.gamma.T, p))
    gp_a4 = np.einsum("il,lsk->isk", dv.gamma_p.T, cB) % p
    out["k14 = γ'(a1)a4 + φ(δ)"] = _eq(k[(1, 4)], plus(gp_a4, phi(dv.delta)), p)

    eps_a = A.left_matrix(dv.epsilon).T  # rows ε·a_i
    epsp_b = B.left_matrix(dv.epsilon_p).T  # rows ε'·b_s
    pinv_gp = phinv(dv.gamma_p.T)  # rows φ⁻¹(γ'(a_i))
    phi_gam = phi(dv.gamma.T)  # rows φ(γ(b_s))

    # g12(a1, a2) = ε a1 a2 + φ⁻¹(γ'(a1)) a2;  g24(a2, a4) = a2 (ε' a4 + φ(γ(a4)))
    if pinv_gp is None or phi_gam is None:
        for name in ("g12 = εa1a2 + φ⁻¹(γ'(a1))a2", "g24 = a2(ε'a4 + φ(γ(a4)))",
                     "h13 = a3εa1 + γ'(a1)a3", "h34 = ε'a4a3 + φ(γ(a4))a3",
                     "f11 = εa1² + φ⁻¹(γ'(a1))a1 + φ⁻¹(k11)", "k44 = ε'a4² + φ(γ(a4))a4 + φ(f44)"):
            out[name] = False
    else:
        coef_a = (eps_a + pinv_gp) % p  # rows: ε a_i + φ⁻¹(γ'(a_i))
        out["g12 = εa1a2 + φ⁻¹(γ'(a1))a2"] = _eq(
            gg[(1, 2)], np.einsum("il,lmk->imk", coef_a, M.left) % p, p)
        coef_b = (epsp_b + phi_gam) % p  # rows: ε' b_s + φ(γ(b_s))
        out["g24 = a2(ε'a4 + φ(γ(a4)))"] = _eq(
            gg[(2, 4)], np.einsum("sl,mlk->msk", coef_b, M.right) % p, p)
        # a3 ε a1 = a3·(ε a1);  γ'(a1) a3 via the left B-action on N
        t1 = np.einsum("il,nlk->ink", eps_a, N.right) % p
        t2 = np.einsum("il,lnk->ink", dv.gamma_p.T, N.left) % p
        out["h13 = a3εa1 + γ'(a1)a3"] = _eq(h[(1, 3)], (t1 + t2) % p, p)
        out["h34 = ε'a4a3 + φ(γ(a4))a3"] = _eq(
            h[(3, 4)], np.einsum("sl,lnk->nsk", coef_b, N.left) % p, p)
        # polarized: f11(u, v) = ε(uv + vu)/2 + (φ⁻¹(γ'(u))v + φ⁻¹(γ'(v))u)/2 + φ⁻¹(k11(u, v))
        symA = (cA + cA.transpose(1, 0, 2)) % p
        e_part = np.einsum("ijl,lk->ijk", symA, A.left_matrix(dv.epsilon).T) % p
        g_part = np.einsum("il,ljk->ijk", pinv_gp, cA) % p
        g_part = (g_part + g_part.transpose(1, 0, 2)) % p
        out["f11 = εa1² + φ⁻¹(γ'(a1))a1 + φ⁻¹(k11)"] = _eq(
            f[(1, 1)], plus((e_part + g_part) * half % p, phinv(k[(1, 1)])), p)
        symB = (cB + cB.transpose(1, 0, 2)) % p
        e_part = np.einsum("ijl,lk->ijk", symB, B.left_matrix(dv.epsilon_p).T) % p
        g_part = np.einsum("il,ljk->ijk", phi_gam, cB) % p
        g_part = (g_part + g_part.transpose(1, 0, 2)) % p
        out["k44 = ε'a4² + φ(γ(a4))a4 + φ(f44)"] = _eq(
            k[(4, 4)], plus((e_part + g_part) * half % p, phi(f[(4, 4)])), p)
    z = g.element(a=dv.epsilon, b=dv.epsilon_p)
    out["diag(ε, ε') central"] = _in_span(c.center_basis, z[None], p)
    return out


def constructive_decomposition(g: Gma, bc: BlockComponents) -> ProperDecomposition:
    """z = diag(ε, ε') and μ assembled from γ', γ, α, τ; ν is the remaining part.

    Raises RequiresCommuting when the remainder is not center-valued, which
    happens only when the structural hypotheses on g fail.
    """
    if bc.derived is None:
        raise RequiresCommuting("derived data missing; use block_components")
    from .traces import BilinearMap as _BM

    dv, p, a = bc.derived, g.p, g.flat
    c = gma_center(g)
    z = g.element(a=dv.epsilon, b=dv.epsilon_p)
    da, dm, dn, db = g.dims
    # μ on corner basis vectors, as A-parts; the B-part is φ of the non-γ' terms
    a_part = np.zeros((g.dim, da), dtype=np.int64)
    b_part = np.zeros((g.dim, db), dtype=np.int64)
    sA, sM, sN, sB = g.slices
    pinv_gp = _need(_phi_many(c, dv.gamma_p.T, inverse=True))
    a_part[sA], b_part[sA] = pinv_gp, dv.gamma_p.T
    for sl, vals in ((sM, dv.alpha.T), (sN, dv.tau.T), (sB, dv.gamma.T)):
        a_part[sl] = vals
        b_part[sl] = _need(_phi_many(c, vals))
    mu = np.zeros((g.dim, g.dim), dtype=np.int64)
    mu[sA, :] = a_part.T
    mu[sB, :] = b_part.T
    partial = ProperDecomposition(z, LinearMap(mu, p), _BM(np.zeros((g.dim,) * 3, dtype=np.int64), p))
    sym = _BM(_sym_from_components(g, bc), p)
    nu = (sym.tensor - partial.reconstruct(a).tensor) % p
    if not _in_span(c.center_basis, nu, p):
        raise RequiresCommuting("remainder is not center-valued")
    return ProperDecomposition(z, LinearMap(mu, p), _BM(nu, p))


def _sym_from_components(g: Gma, bc: BlockComponents) -> np.ndarray:
    """Reassemble the symmetric tensor of q from its block components."""
    p, d = g.p, g.dim
    half = field.inv(2, p)
    sl = dict(zip(BLOCKS, g.slices))
    s = np.zeros((d, d, d), dtype=np.int64)
    for i, j in KEYS:
        scale = 1 if i == j else half
        for name, corner in zip("fghk", BLOCKS):
            val = getattr(bc, name)[(i, j)] * scale % p
            s[sl[i], sl[j], sl[corner]] = val
            s[sl[j], sl[i], sl[corner]] = val.transpose(1, 0, 2)
    return s
