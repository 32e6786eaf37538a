"""Lie isomorphisms between generalized matrix algebras and their standard form l = m + n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import field
from .algebra import Algebra, LinearMap
from .gma import DEFAULT_CAP, Gma, Verdict, gma_center
from .traces import BilinearMap, ProperDecomposition, is_commuting_trace, proper_trace_decompose

HOMOMORPHISM = "homomorphism"
NEGATIVE_ANTI = "negative-of-anti-homomorphism"


class DimensionMismatch(ValueError):
    pass


class LieDecompositionError(RuntimeError):
    """Decomposition failed; ``reason`` is NotProperTrace, LambdaZero, NeitherKind or InvariantViolated."""

    def __init__(self, reason: str, witness: Any = None, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.witness = witness
        self.detail = detail


@dataclass(frozen=True, eq=False)
class LieDecomposition:
    lam: np.ndarray
    mu1: LinearMap
    m: LinearMap
    n: LinearMap
    kind: str
    m0: LinearMap  # λ·l + μ₁∘l/2; equals m or −m depending on kind
    degenerate: bool = False  # m0 passed both kind tests
    h: np.ndarray | None = None  # n(x) = h(x)·1 when the target center is the scalars
    proper: ProperDecomposition | None = None


def _check_dims(l: LinearMap, g: Gma, g2: Gma) -> None:
    if l.matrix.shape != (g2.dim, g.dim):
        raise DimensionMismatch(f"map has shape {l.matrix.shape}, expected {(g2.dim, g.dim)}")
    if g.dim != g2.dim:
        raise DimensionMismatch("source and target dimensions differ")
    if g.p != g2.p:
        raise DimensionMismatch("source and target moduli differ")


def _images(l: LinearMap) -> np.ndarray:
    """Rows: l(e_i)."""
    return l.matrix.T % l.p


def _mul_rows(a: Algebra, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """T[i, j] = xs[i]·ys[j]."""
    return np.einsum("ia,jb,abk->ijk", xs, ys, a.mult) % a.p


def _apply_rows(l: LinearMap, t: np.ndarray) -> np.ndarray:
    """l applied to the trailing axis."""
    return np.einsum("ka,...a->...k", l.matrix, t) % l.p


def _first_pair(diff: np.ndarray):
    bad = np.argwhere(diff.any(axis=-1))
    return None if bad.size == 0 else (int(bad[0][0]), int(bad[0][1]))


def is_lie_isomorphism(l: LinearMap, g: Gma, g2: Gma) -> Verdict:
    """Bijective and l([x, y]) = [l(x), l(y)] on basis pairs."""
    _check_dims(l, g, g2)
    p = g.p
    ker = field.nullspace(l.matrix, p)
    if ker.shape[0]:
        return Verdict(False, field.least_nonzero(ker, p, g.dim), "not bijective: kernel vector")
    img = _images(l)
    lhs = _apply_rows(l, g.flat.bracket)
    rhs = (_mul_rows(g2.flat, img, img) - _mul_rows(g2.flat, img, img).transpose(1, 0, 2)) % p
    pair = _first_pair((lhs - rhs) % p)
    if pair is not None:
        i, j = pair
        return Verdict(False, (g.flat.basis_vector(i), g.flat.basis_vector(j)),
                       "bracket not preserved on basis pair")
    return Verdict(True)


def _is_multiplicative(a: Algebra, b: Algebra, m: LinearMap, anti: bool = False):
    """First basis pair where m(xy) differs from m(x)m(y) (or m(y)m(x)); None if none."""
    img = _images(m)
    lhs = _apply_rows(m, a.mult)
    prod = _mul_rows(b, img, img)
    rhs = prod.transpose(1, 0, 2) if anti else prod
    return _first_pair((lhs - rhs) % a.p)


def lie_decompose(l: LinearMap, g: Gma, g2: Gma) -> LieDecomposition:
    """Standard form of a Lie isomorphism, or LieDecompositionError.

    The trace y ↦ l(l⁻¹(y)²) on the target is put in proper form
    λ·y² + μ₁(y)·y + ν₁(y); m0 = λ·l + μ₁∘l/2 is then tested directly for being
    multiplicative (m = m0) or anti-multiplicative (m = −m0), and n = l − m.
    """
    _check_dims(l, g, g2)
    p = g.p
    a, b = g.flat, g2.flat
    linv = LinearMap(field.inverse(l.matrix, p), p)
    pre = _images(linv)  # rows l⁻¹(e_i)
    q = BilinearMap(_apply_rows(l, _mul_rows(a, pre, pre)), p)
    dec = proper_trace_decompose(g2, q)
    if dec is None:
        v = is_commuting_trace(g2, q)
        raise LieDecompositionError("NotProperTrace", None if v.holds else v.witness,
                                    "the trace l(l⁻¹(y)²) is not proper")
    lam = dec.z
    if not lam.any():
        raise LieDecompositionError("LambdaZero", None, "coefficient of y² vanishes")
    half = field.inv(2, p)
    m0 = LinearMap(field.matmul(b.left_matrix(lam), l.matrix, p)
                   + field.matmul(dec.mu.matrix, l.matrix, p) * half, p)
    hom_fail = _is_multiplicative(a, b, m0)
    anti_fail = _is_multiplicative(a, b, m0, anti=True)
    if hom_fail is None:
        kind, m = HOMOMORPHISM, m0
    elif anti_fail is None:
        kind, m = NEGATIVE_ANTI, -m0
    else:
        i, j = hom_fail
        raise LieDecompositionError("NeitherKind", (a.basis_vector(i), a.basis_vector(j)),
                                    "m0 is neither multiplicative nor anti-multiplicative")
    n = l - m
    out = LieDecomposition(lam, dec.mu, m, n, kind, m0,
                           degenerate=hom_fail is None and anti_fail is None,
                           h=_scalar_functional(g2, n), proper=dec)
    bad = verify_standard_form(l, out, g, g2)
    if bad:
        raise LieDecompositionError("InvariantViolated", bad, "; ".join(bad))
    return out


def _scalar_functional(g2: Gma, n: LinearMap) -> np.ndarray | None:
    """h with n(x) = h(x)·1, when Z(G') = F_p·1."""
    c = gma_center(g2)
    if c.dim != 1:
        return None
    unit = g2.flat.unit
    i0 = int(np.flatnonzero(unit)[0])
    h = n.matrix[i0] * field.inv(int(unit[i0]), g2.p) % g2.p
    if not np.array_equal(np.outer(unit, h) % g2.p, n.matrix):
        return None
    return h


def verify_standard_form(l: LinearMap, dec: LieDecomposition, g: Gma, g2: Gma) -> list[str]:
    """Violated clauses of the standard form, independent of how dec was made."""
    p = g.p
    a, b = g.flat, g2.flat
    c = gma_center(g2)
    out: list[str] = []
    m, n = dec.m, dec.n
    if not np.array_equal((m.matrix + n.matrix) % p, l.matrix % p):
        out.append("l = m + n")
    if not field.span_contains_all(c.center_basis, n.matrix.T, p, b.dim):
        out.append("n central-valued")
    if _apply_rows(n, a.bracket).any():
        out.append("n vanishes on commutators")
    if dec.kind == HOMOMORPHISM:
        if _is_multiplicative(a, b, m) is not None:
            out.append("m multiplicative")
    elif dec.kind == NEGATIVE_ANTI:
        if _is_multiplicative(a, b, -m, anti=True) is not None:
            out.append("-m anti-multiplicative")
    else:
        out.append("kind recognized")
    r = field.rank(m.matrix, p)
    if r < g.dim:
        out.append("m injective")
    if c.dim == 1:
        if r < g2.dim:
            out.append("m surjective")
        m1 = m(a.unit)
        if not (np.array_equal(m1, b.unit) or np.array_equal(m1, (-b.unit) % p)):
            out.append("m(1) = ±1")
    return out


def square_defect_central(dec: LieDecomposition, g: Gma, g2: Gma) -> bool:
    """m0(x²) − m0(x)² ∈ Z(G') for every basis x."""
    a, b, p = g.flat, g2.flat, g.p
    img = _images(dec.m0)
    sq = np.einsum("iik->ik", a.mult)  # e_i²
    lhs = _apply_rows(dec.m0, sq)
    rhs = np.einsum("ia,ib,abk->ik", img, img, b.mult) % p
    return field.span_contains_all(gma_center(g2).center_basis, (lhs - rhs) % p, p, b.dim)


def kind_residual(dec: LieDecomposition, g: Gma, g2: Gma) -> np.ndarray:
    """λ·m0(xy) − α·m0(x)m0(y) − (α − 1)·m0(y)m0(x) on basis pairs, α = 1 or 0 by kind."""
    a, b, p = g.flat, g2.flat, g.p
    alpha = 1 if dec.kind == HOMOMORPHISM else 0
    img = _images(dec.m0)
    lhs = _apply_rows(dec.m0, a.mult)
    lhs = np.einsum("ka,ija->ijk", b.left_matrix(dec.lam), lhs) % p
    prod = _mul_rows(b, img, img)
    return (lhs - alpha * prod - (alpha - 1) * prod.transpose(1, 0, 2)) % p


# -- the identity [[x², y], [x, y]] ---------------------------------------------------

def _identity_value(a: Algebra, x, y) -> np.ndarray:
    x2 = a.mul(x, x)
    return a.commutator(a.commutator(x2, y), a.commutator(x, y))


def _search_points(a: Algebra, xs_coords, ys_coords):
    """First (x, y) supported on the given coordinates where the identity fails."""
    p, d = a.p, a.dim
    k = len(xs_coords) + len(ys_coords)
    for pts in field.vector_chunks(k, p, chunk=1024):
        for pt in pts:
            x = np.zeros(d, dtype=np.int64)
            y = np.zeros(d, dtype=np.int64)
            x[list(xs_coords)] = pt[: len(xs_coords)]
            y[list(ys_coords)] = pt[len(xs_coords):]
            if _identity_value(a, x, y).any():
                return x, y
    return None


def check_identity_L41(g: Gma, cap: int = DEFAULT_CAP) -> Verdict:
    """[[x², y], [x, y]] = 0 on all of G, else a violating pair (x, y).

    For p >= 5 the identity is multilinearized: its coefficient on
    x_a x_b x_c y_d y_e, symmetrized over (a, b, c) and (d, e), must vanish.
    """
    a, p, d = g.flat, g.p, g.dim
    if p == 3:
        if p ** (2 * d) > cap:
            raise field.TooLarge(f"enumeration needs {p}^{2 * d} pairs, cap is {cap}")
        w = _search_points(a, range(d), range(d))
        return Verdict(True) if w is None else Verdict(False, w)
    K = a.bracket
    for dd in range(d):
        for ee in range(dd, d):
            t = 0
            for u, v in ((dd, ee), (ee, dd)) if dd != ee else ((dd, ee),):
                # [[e_a e_b, e_u], [e_c, e_v]]
                ab_u = np.einsum("abt,tk->abk", a.mult, K[:, u, :]) % p
                c_v = K[:, v, :]  # [e_c, e_v]
                inner = np.tensordot(ab_u, K, axes=([2], [0])) % p  # (a, b, s, k): [ab_u_t e_t, e_s]
                t = t + np.einsum("absk,cs->abck", inner, c_v) % p
            t = t % p
            sym = sum(t.transpose(perm) for perm in
                      ((0, 1, 2, 3), (0, 2, 1, 3), (1, 0, 2, 3), (1, 2, 0, 3), (2, 0, 1, 3), (2, 1, 0, 3))) % p
            nz = np.argwhere(sym.any(axis=-1))
            if nz.size:
                xc = sorted(set(int(i) for i in nz[0]))
                yc = sorted({dd, ee})
                w = _search_points(a, xc, yc)
                if w is None:  # cannot happen: the restricted polynomial is nonzero
                    raise AssertionError("nonzero identity coefficient without a witness")
                return Verdict(False, w)
    return Verdict(True)
