import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmalg import field
from gmalg.algebra import (Algebra, LinearMap, alg_mul, center_basis, commuting_linear_map_space,
                           diagonal_algebra, is_commuting_map, matrix_algebra,
                           proper_linear_decompose, upper_triangular_algebra, validate_algebra)


def basis_span(maps, p, d):
    return np.array([f.matrix.reshape(-1) for f in maps]).reshape(-1, d * d) % p


def all_commuting_maps_bruteforce(a: Algebra) -> np.ndarray:
    """Every linear map f with [f(x), x] = 0 on all of a, by full enumeration (flattened)."""
    p, d = a.p, a.dim
    xs = field.all_vectors(d, p)
    mats = np.array(list(itertools.product(range(p), repeat=d * d)), dtype=np.int64).reshape(-1, d, d)
    fx = np.einsum("fkj,xj->fxk", mats, xs) % p
    xy = np.einsum("fxa,xb,abk->fxk", fx, xs, a.mult)
    yx = np.einsum("xa,fxb,abk->fxk", xs, fx, a.mult)
    ok = ~((xy - yx) % p).any(axis=(1, 2))
    return mats[ok].reshape(-1, d * d)


def test_validate_matrix_algebra():
    assert validate_algebra(matrix_algebra(2, 5)) == []


def test_alg_mul_units():
    a = matrix_algebra(2, 5)
    e12, e21 = a.basis_vector(1), a.basis_vector(2)
    assert alg_mul(a, e12, e21).tolist() == [1, 0, 0, 0]


def test_first_violation_is_associativity():
    a = matrix_algebra(2, 5)
    mult = a.mult.copy()
    mult[0, 0, 0] = 2
    bad = validate_algebra(Algebra(5, mult, a.unit))
    assert bad[0].axiom == "associativity"
    assert tuple(bad[0].index) == (0, 0, 1)


def test_center_examples():
    assert center_basis(matrix_algebra(2, 5)).tolist() == [[1, 0, 0, 1]]
    assert center_basis(upper_triangular_algebra(2, 3)).tolist() == [[1, 0, 1]]
    assert center_basis(diagonal_algebra(2, 7)).shape[0] == 2


def test_commuting_maps_on_m2_are_identity_and_trace():
    a = matrix_algebra(2, 5)
    space = commuting_linear_map_space(a)
    assert len(space) == 5
    expected = [np.eye(4, dtype=np.int64).reshape(-1)]
    unit = a.unit
    # x -> tau(x)·1 for every linear functional tau with values in the center
    for j in range(4):
        col = np.zeros((4, 4), dtype=np.int64)
        col[:, j] = unit
        expected.append(col.reshape(-1))
    assert field.same_span(basis_span(space, 5, 4), np.array(expected), 5, 16)


def test_commuting_maps_on_t2_f3_match_enumeration():
    a = upper_triangular_algebra(2, 3)
    brute = all_commuting_maps_bruteforce(a)
    assert brute.shape[0] == 3 ** 4
    space = commuting_linear_map_space(a)
    assert len(space) == 4
    assert field.same_span(basis_span(space, 3, 3), brute, 3, 9)


def test_proper_linear_decompose_identity():
    a = matrix_algebra(2, 5)
    w = proper_linear_decompose(a, LinearMap(np.eye(4, dtype=np.int64), 5))
    assert w.z.tolist() == [1, 0, 0, 1]
    assert not w.eta.matrix.any()


def test_left_multiplication_is_not_proper():
    a = matrix_algebra(2, 5)
    f = LinearMap(a.left_matrix(a.basis_vector(0)), 5)
    assert not is_commuting_map(a, f)
    assert proper_linear_decompose(a, f) is None


@st.composite
def commuting_combination(draw):
    a = draw(st.sampled_from([matrix_algebra(2, 5), upper_triangular_algebra(3, 5),
                              upper_triangular_algebra(2, 3), diagonal_algebra(3, 7)]))
    space = commuting_linear_map_space(a)
    coeffs = draw(st.lists(st.integers(0, a.p - 1), min_size=len(space), max_size=len(space)))
    m = sum((c * f.matrix for c, f in zip(coeffs, space)), np.zeros((a.dim, a.dim), dtype=np.int64))
    return a, LinearMap(m % a.p, a.p)


@settings(max_examples=60, deadline=None)
@given(commuting_combination())
def test_commuting_maps_reconstruct_from_proper_form(data):
    a, f = data
    assert is_commuting_map(a, f)
    w = proper_linear_decompose(a, f)
    assert w is not None
    assert w.reconstruct(a) == f
    zb = center_basis(a)
    assert field.span_contains_all(zb, w.eta.matrix.T, a.p, a.dim)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([matrix_algebra(2, 5), upper_triangular_algebra(3, 5)]), st.data())
def test_center_closed_under_product(a, data):
    zb = center_basis(a)
    c = data.draw(st.lists(st.integers(0, a.p - 1), min_size=2 * zb.shape[0],
                           max_size=2 * zb.shape[0]))
    k = zb.shape[0]
    u = field.matmul(np.array(c[:k])[None], zb, a.p)[0]
    v = field.matmul(np.array(c[k:])[None], zb, a.p)[0]
    assert field.subspace_contains(zb, a.mul(u, v), a.p)
    assert np.array_equal(a.mul(u, v), a.mul(v, u))
