"""Structural conditions on a Gma, evaluated as verdicts with witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import field
from .algebra import Algebra, center_basis, commuting_linear_map_space, proper_linear_decompose
from .gma import (DEFAULT_CAP, Gma, Verdict, check_loyal, check_module_faithful, gma_center)
from .traces import properness_basis, trace_space_vectors, vector_to_sym

DOMAIN_CAP = 10**4

THEOREMS = ("3.4", "3.17", "4.2", "4.3-target")


@dataclass
class HypothesisReport:
    theorem: str
    conditions: dict[str, Verdict]  # the statement's hypotheses
    extras: dict[str, Verdict] = dc_field(default_factory=dict)  # always-run structural checks

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.conditions.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.conditions.items() if not v.holds]


# -- individual checks ---------------------------------------------------------

def commuting_maps_proper(a: Algebra) -> Verdict:
    """Every commuting linear map of a is z·id + η with η center-valued."""
    for f in commuting_linear_map_space(a):
        if proper_linear_decompose(a, f) is None:
            return Verdict(False, f.matrix, "commuting map that is not proper")
    return Verdict(True)


def noncommutative(a: Algebra) -> Verdict:
    k = np.argwhere(a.bracket.any(axis=-1))
    if k.size:
        i, j = (int(t) for t in k[0])
        return Verdict(True, (a.basis_vector(i), a.basis_vector(j)), "non-commuting basis pair")
    return Verdict(False, {"dim": a.dim}, "algebra is commutative")


def projection_equals_center(g: Gma, corner: str) -> Verdict:
    c = gma_center(g)
    a = g.context.A if corner == "A" else g.context.B
    proj = c.piA_basis if corner == "A" else c.piB_basis
    z = center_basis(a)
    for v in z:
        if not field.subspace_contains(proj, v, g.p):
            return Verdict(False, v, f"central element of {corner} outside the projection of Z(G)")
    return Verdict(True)


def center_proper_subset(a: Algebra) -> Verdict:
    z = center_basis(a)
    if z.shape[0] < a.dim:
        return Verdict(True)
    return Verdict(False, {"dim_center": int(z.shape[0]), "dim": a.dim}, "center is everything")


def is_central(a: Algebra) -> Verdict:
    """Z(a) = F_p·1."""
    z = center_basis(a)
    if z.shape[0] == 1:
        return Verdict(True)
    return Verdict(False, {"dim_center": int(z.shape[0])}, "center is larger than the scalars")


def gma_is_central(g: Gma) -> Verdict:
    c = gma_center(g)
    if c.dim == 1:
        return Verdict(True)
    return Verdict(False, {"dim_center": c.dim}, "center is larger than the scalars")


def is_base_field(a: Algebra) -> Verdict:
    if a.dim == 1:
        return Verdict(True)
    return Verdict(False, {"dim": a.dim}, "corner is not one-dimensional")


def scalar_torsion_free(g: Gma) -> Verdict:
    """r·m = 0 forces r = 0 or m = 0 for scalars r; with A the base field this is M ≠ 0 faithfulness."""
    v = check_module_faithful(g, "left")
    return Verdict(v.holds, v.witness, "nonzero annihilator of M" if not v.holds else "")


def independent_pair(g: Gma, cap: int = DEFAULT_CAP) -> Verdict:
    """m0 ∈ M, b0 ∈ B with m0·b0 and m0 linearly independent.

    m0 runs over M in little-endian order, b0 over the basis of B: if m0·b
    lies on the line of m0 for every basis b then it does for every b.
    """
    M, p = g.context.M, g.p
    dm, db = M.dim, M.right_alg.dim
    if dm == 0:
        return Verdict(False, {"dim_M": 0}, "M is zero")
    if p**dm > cap:
        raise field.TooLarge(f"search needs {p}^{dm} module elements, cap is {cap}")
    for chunk in field.vector_chunks(dm, p, chunk=4096):
        for m in chunk:
            if not m.any():
                continue
            prods = np.einsum("m,mjk->jk", m, M.right) % p  # rows m·b_j
            for j in range(db):
                if field.rank(np.vstack([m, prods[j]]), p) == 2:
                    return Verdict(True, (m.copy(), M.right_alg.basis_vector(j)))
    return Verdict(False, {"dim_M": dm}, "m·B stays on the line of m for every m")


def largest_central_ideal(g: Gma) -> np.ndarray:
    """Basis of {z ∈ Z(G) : z·G ⊆ Z(G)}, the largest ideal inside the center."""
    from .traces import _center_reducer

    c = gma_center(g)
    zb = c.center_basis
    if zb.shape[0] == 0:
        return zb
    red = _center_reducer(g)
    a, p = g.flat, g.p
    # rows (i, s): reduced coordinates of z·e_i for each center basis vector
    prods = np.stack([a.right_matrix(a.basis_vector(i)) for i in range(a.dim)])  # (i, k, t)
    vals = np.einsum("ikt,rt->rik", prods, zb) % p  # (r, i, k): z_r·e_i
    vals = np.einsum("sk,rik->ris", red, vals) % p
    cons = vals.reshape(zb.shape[0], -1).T
    coeff = field.nullspace(cons, p)
    return field.matmul(coeff, zb, p) if coeff.shape[0] else np.zeros((0, a.dim), dtype=np.int64)


def no_central_ideals(g: Gma) -> Verdict:
    ideal = largest_central_ideal(g)
    w = field.least_nonzero(ideal, g.p, g.dim)
    return Verdict(True) if w is None else Verdict(False, w, "nonzero central ideal element")


def center_is_domain(g: Gma, cap: int = DOMAIN_CAP) -> Verdict:
    """No two nonzero central elements multiply to zero (exhaustive in z1)."""
    c = gma_center(g)
    zb, p, a = c.center_basis, g.p, g.flat
    r = zb.shape[0]
    if p**r > cap:
        return Verdict(None, None, f"skipped: {p}^{r} center elements exceed {cap}")
    for coeffs in field.vector_chunks(r, p):
        for co in coeffs:
            if not co.any():
                continue
            z1 = field.matmul(co[None], zb, p)[0]
            prods = field.matmul(zb, a.left_matrix(z1).T, p)  # rows z1·zb_s
            ker = field.nullspace(prods.T, p)
            w = field.least_nonzero(ker, p, r)
            if w is not None:
                return Verdict(False, (z1, field.matmul(w[None], zb, p)[0]))
    return Verdict(True)


def central_scalars_regular(g: Gma, cap: int = DOMAIN_CAP) -> Verdict:
    """λ ∈ π_A(Z(G)) nonzero and a ≠ 0 never give λ·a = 0."""
    c = gma_center(g)
    A, p = g.context.A, g.p
    basis = c.piA_basis
    r = basis.shape[0]
    if p**r > cap:
        return Verdict(None, None, f"skipped: {p}^{r} projections exceed {cap}")
    for coeffs in field.vector_chunks(r, p):
        for co in coeffs:
            if not co.any():
                continue
            lam = field.matmul(co[None], basis, p)[0]
            ker = field.nullspace(A.left_matrix(lam), p)
            w = field.least_nonzero(ker, p, A.dim)
            if w is not None:
                return Verdict(False, (lam, w))
    return Verdict(True)


def all_commuting_traces_proper(g: Gma, cap: int = DEFAULT_CAP) -> Verdict:
    ts = trace_space_vectors(g, "commuting", cap)
    pb = properness_basis(g)
    if field.span_contains_all(pb, ts, g.p, pb.shape[1]):
        return Verdict(True)
    for v in ts:
        if not field.subspace_contains(pb, v, g.p):
            return Verdict(False, vector_to_sym(v, g.dim, g.p).tensor,
                           "commuting trace outside the proper form")
    return Verdict(True)


def either_noncommutative(g: Gma) -> Verdict:
    va, vb = noncommutative(g.context.A), noncommutative(g.context.B)
    if va.holds:
        return Verdict(True, ("A",) + va.witness)
    if vb.holds:
        return Verdict(True, ("B",) + vb.witness)
    return Verdict(False, {"A": va.witness, "B": vb.witness}, "A and B are both commutative")


# -- reports ------------------------------------------------------------------------

def _always(g: Gma) -> dict[str, Verdict]:
    return {
        "no_nonzero_central_ideals": no_central_ideals(g),
        "center_is_domain": center_is_domain(g),
        "M_faithful_left": check_module_faithful(g, "left"),
        "M_faithful_right": check_module_faithful(g, "right"),
    }


def hypothesis_report(g: Gma, theorem: str, cap: int = DEFAULT_CAP) -> HypothesisReport:
    """Evaluate the named statement's hypotheses on g."""
    A, B = g.context.A, g.context.B
    if theorem in ("3.4", "4.3-target"):
        cond = {
            "commuting_maps_proper_on_A": commuting_maps_proper(A),
            "commuting_maps_proper_on_B": commuting_maps_proper(B),
            "piA_center_equals_ZA": projection_equals_center(g, "A"),
            "ZA_proper_subset": center_proper_subset(A),
            "piB_center_equals_ZB": projection_equals_center(g, "B"),
            "ZB_proper_subset": center_proper_subset(B),
            "M_loyal": check_loyal(g, cap),
            "A_noncommutative": noncommutative(A),
            "B_noncommutative": noncommutative(B),
        }
        if theorem == "4.3-target":
            cond["A_or_B_noncommutative"] = either_noncommutative(g)
    elif theorem == "3.17":
        cond = {
            "A_is_base_field": is_base_field(A),
            "B_noncommutative": noncommutative(B),
            "G_central": gma_is_central(g),
            "B_central": is_central(B),
            "commuting_maps_proper_on_B": commuting_maps_proper(B),
            "M_scalar_torsion_free": scalar_torsion_free(g),
            "independent_pair_exists": independent_pair(g, cap),
        }
    elif theorem == "4.2":
        cond = {
            "all_commuting_traces_proper": all_commuting_traces_proper(g, cap),
            "A_or_B_noncommutative": either_noncommutative(g),
            "M_loyal": check_loyal(g, cap),
        }
    else:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    extras = _always(g)
    if cond.get("M_loyal") is not None and cond["M_loyal"].holds:
        extras["central_scalars_regular"] = central_scalars_regular(g)
    return HypothesisReport(theorem, cond, extras)
