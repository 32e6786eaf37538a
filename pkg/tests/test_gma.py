import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmalg import catalog, field
from gmalg.algebra import center_basis, diagonal_algebra, field_algebra, matrix_algebra
from gmalg.field import TooLarge
from gmalg.gma import (Bimodule, MoritaContext, NotIdempotent, NotInDomain, TrivialIdempotent,
                       build_from_idempotent, build_triangular, check_loyal,
                       check_module_faithful, gma_center, make_gma, phi_apply,
                       phi_inverse_apply, validate_gma, validate_morita, zero_module)
from gmalg.hypotheses import hypothesis_report

CATALOG = [("full", (4, 2, 5)), ("full", (3, 1, 5)), ("full", (2, 1, 5)), ("full", (3, 2, 7)),
           ("triangular", (3, 5)), ("triangular", (2, 3)), ("triangular", (4, 5)),
           ("nonloyal_demo", (5,)), ("nonloyal_demo", (3,))]


def build(name, args):
    return getattr(catalog, name)(*args)


def first_coordinate_context(p=5):
    """A = F_p ⊕ F_p acting on M = F_p through its first coordinate, B = F_p."""
    A, B = diagonal_algebra(2, p), field_algebra(p)
    left = np.zeros((2, 1, 1), dtype=np.int64)
    left[0, 0, 0] = 1
    right = np.ones((1, 1, 1), dtype=np.int64)
    return build_triangular(A, Bimodule(A, B, 1, left, right), B)


@pytest.mark.parametrize("name,args", CATALOG)
def test_catalog_instances_validate(name, args):
    assert validate_gma(build(name, args)) == []


def test_zeroed_pairing_is_reported():
    g = catalog.full(3, 1, 5)
    c = g.context
    bad = MoritaContext(c.A, c.B, c.M, c.N, c.phi, np.zeros_like(c.psi))
    v = validate_morita(bad)
    assert v[0].axiom == "Φ(m,n)m' = mΨ(n,m')"
    assert tuple(v[0].index) == (0, 0, 0)


def test_both_modules_zero_rejected():
    A = field_algebra(5)
    with pytest.raises(ValueError):
        build_triangular(A, zero_module(A, A), A)
    ctx = MoritaContext(A, A, zero_module(A, A), zero_module(A, A),
                        np.zeros((0, 0, 1), dtype=np.int64), np.zeros((0, 0, 1), dtype=np.int64))
    assert any(v.axiom == "M and N both zero" for v in validate_morita(ctx))
    with pytest.raises(ValueError):
        make_gma(ctx)


def test_block_partition_dimensions():
    assert catalog.full(4, 2, 5).dims == (4, 4, 4, 4)
    assert catalog.full(3, 1, 5).dims == (1, 2, 2, 4)
    assert catalog.triangular(3, 5).dims == (1, 2, 0, 3)
    assert catalog.triangular(2, 3).dims == (1, 1, 0, 1)


def test_block_partition_embedding_is_matrix_algebra():
    g = catalog.full(3, 1, 5)
    m3 = matrix_algebra(3, 5)
    E = g.embedding
    # flat product agrees with the matrix product through the embedding
    lhs = np.einsum("ijk,kl->ijl", g.flat.mult, E) % 5
    rhs = np.einsum("ia,jb,abl->ijl", E, E, m3.mult) % 5
    assert np.array_equal(lhs, rhs)


def test_peirce_of_m2_at_e11_is_full_2_1():
    g = build_from_idempotent(matrix_algebra(2, 5), [1, 0, 0, 0])
    ref = catalog.full(2, 1, 5)
    assert g.dims == (1, 1, 1, 1)
    assert np.array_equal(g.flat.mult, ref.flat.mult)
    assert np.array_equal(g.embedding, np.eye(4, dtype=np.int64))
    assert validate_gma(g) == []


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)])
def test_peirce_reproduces_block_partition(n, k):
    e = np.zeros(n * n, dtype=np.int64)
    for i in range(k):
        e[i * n + i] = 1
    g = build_from_idempotent(matrix_algebra(n, 5), e)
    ref = catalog.full(n, k, 5)
    assert g.dims == ref.dims
    assert np.array_equal(g.flat.mult, ref.flat.mult)
    assert np.array_equal(g.embedding, ref.embedding)


def test_peirce_rejects_bad_idempotents():
    a = matrix_algebra(2, 5)
    with pytest.raises(NotIdempotent):
        build_from_idempotent(a, [2, 0, 0, 0])
    with pytest.raises(TrivialIdempotent):
        build_from_idempotent(a, [0, 0, 0, 0])
    with pytest.raises(TrivialIdempotent):
        build_from_idempotent(a, [1, 0, 0, 1])


@pytest.mark.parametrize("name,args", CATALOG)
def test_center_matches_flat_center(name, args):
    g = build(name, args)
    c = gma_center(g)
    assert field.same_span(c.center_basis, center_basis(g.flat), g.p, g.dim)


@pytest.mark.parametrize("args", [(4, 2, 5), (3, 1, 5), (2, 1, 3), (3, 2, 7)])
def test_full_matrix_center_is_scalars(args):
    assert gma_center(catalog.full(*args)).dim == 1


def test_center_of_first_coordinate_context():
    g = first_coordinate_context()
    c = gma_center(g)
    assert validate_gma(g) == []
    assert c.dim == 2
    assert field.same_span(c.center_basis, center_basis(g.flat), 5, g.dim)
    assert check_module_faithful(g, "left").witness.tolist() == [0, 1]
    assert check_module_faithful(g, "right").holds


def test_phi_examples():
    c = gma_center(catalog.full(2, 1, 5))
    assert phi_apply(c, [1]).tolist() == [1]
    assert phi_apply(c, [2]).tolist() == [2]
    assert phi_inverse_apply(c, [3]).tolist() == [3]
    c4 = gma_center(catalog.full(4, 2, 5))
    assert phi_apply(c4, [1, 0, 0, 1]).tolist() == [1, 0, 0, 1]
    with pytest.raises(NotInDomain):
        phi_apply(c4, [1, 0, 0, 0])


def test_loyalty_examples():
    v = check_loyal(catalog.nonloyal_demo(5))
    assert not v.holds
    a, b = v.witness
    assert a.tolist() == [1, 0] and b.tolist() == [0, 1]
    assert check_loyal(catalog.full(2, 1, 5)).holds
    with pytest.raises(TooLarge):
        check_loyal(catalog.full(4, 2, 5), cap=100)


def test_nonloyal_demo_is_faithful():
    g = catalog.nonloyal_demo(5)
    assert check_module_faithful(g, "left").holds
    assert check_module_faithful(g, "right").holds


def test_hypothesis_report_examples():
    assert hypothesis_report(catalog.full(4, 2, 5), "3.4").holds
    r = hypothesis_report(catalog.full(3, 1, 5), "3.4")
    assert r.failed() == ["ZA_proper_subset", "A_noncommutative"]
    r = hypothesis_report(catalog.full(3, 1, 5), "3.17")
    assert r.holds
    m0, b0 = r.conditions["independent_pair_exists"].witness
    assert m0.tolist() == [1, 0] and b0.tolist() == [0, 1, 0, 0]
    r = hypothesis_report(catalog.triangular(2, 3), "3.4")
    assert r.failed() == ["ZA_proper_subset", "ZB_proper_subset",
                          "A_noncommutative", "B_noncommutative"]
    assert hypothesis_report(catalog.triangular(3, 5), "3.17").holds
    assert hypothesis_report(catalog.full(4, 2, 5), "4.2").holds


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CATALOG[:7]), st.data())
def test_phi_is_multiplicative_unital_bijective(inst, data):
    g = build(*inst)
    c, p = gma_center(g), g.p
    k = c.piA_basis.shape[0]
    assert c.piB_basis.shape[0] == k
    assert field.rank(c.phi.T, p) == k
    A, B = g.context.A, g.context.B
    assert np.array_equal(phi_apply(c, A.unit), B.unit % p)
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=2 * k, max_size=2 * k))
    u = field.matmul(np.array(coeffs[:k])[None], c.piA_basis, p)[0]
    v = field.matmul(np.array(coeffs[k:])[None], c.piA_basis, p)[0]
    assert np.array_equal(phi_apply(c, A.mul(u, v)), B.mul(phi_apply(c, u), phi_apply(c, v)))
    assert np.array_equal(phi_inverse_apply(c, phi_apply(c, u)), u)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CATALOG[:7]), st.data())
def test_center_corners_intertwine_modules(inst, data):
    g = build(*inst)
    c, p = gma_center(g), g.p
    ctx = g.context
    k = c.piA_basis.shape[0]
    coeffs = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=k, max_size=k)))
    a = field.matmul(coeffs[None], c.piA_basis, p)[0]
    b = phi_apply(c, a)
    # a·m = m·φ(a) and n·a = φ(a)·n, and both corners are central
    for u in np.eye(ctx.M.dim, dtype=np.int64):
        assert np.array_equal(ctx.M.act_left(a, u), ctx.M.act_right(u, b))
    for u in np.eye(ctx.N.dim, dtype=np.int64):
        assert np.array_equal(ctx.N.act_right(u, a), ctx.N.act_left(b, u))
    assert field.subspace_contains(center_basis(ctx.A), a, p)
    assert field.subspace_contains(center_basis(ctx.B), b, p)
