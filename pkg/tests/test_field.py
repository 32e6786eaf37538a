import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmalg import field
from gmalg.field import NoSolution


def matrices(p=st.sampled_from([3, 5, 7, 101]), max_side=7):
    @st.composite
    def build(draw):
        q = draw(p)
        r = draw(st.integers(1, max_side))
        c = draw(st.integers(1, max_side))
        entries = draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))
        return q, np.array(entries, dtype=np.int64).reshape(r, c)
    return build()


def test_rref_identity():
    red = field.rref(np.eye(2, dtype=np.int64), 5)
    assert np.array_equal(red.matrix, np.eye(2))
    assert red.pivots == [0, 1]


def test_rref_dependent_rows():
    red = field.rref([[2, 4], [1, 2]], 5)
    assert red.matrix.tolist() == [[1, 2], [0, 0]]
    assert red.pivots == [0]


def test_rref_zero():
    red = field.rref(np.zeros((3, 3), dtype=np.int64), 5)
    assert not red.matrix.any()
    assert red.pivots == []


def test_solve_affine_scalar():
    sol = field.solve_affine([[2]], [3], 5)
    assert sol.particular.tolist() == [4]
    assert sol.kernel_basis == []


def test_solve_affine_kernel():
    sol = field.solve_affine([[1, 1]], [0], 3)
    assert sol.particular.tolist() == [0, 0]
    assert [k.tolist() for k in sol.kernel_basis] == [[2, 1]]


def test_solve_affine_inconsistent():
    with pytest.raises(NoSolution):
        field.solve_affine([[0]], [1], 5)


def test_subspace_contains_examples():
    assert field.subspace_contains([[1, 0]], [3, 0], 5)
    assert not field.subspace_contains([[1, 0]], [0, 1], 5)
    assert field.subspace_contains(np.zeros((0, 2)), [0, 0], 5)


def test_modulus_checks():
    for bad in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            field.check_modulus(bad)
    assert field.check_modulus(5) == 5


def test_matmul_exact_for_large_modulus():
    p = 33554393  # largest prime below 2**25
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, (5, 300))
    b = rng.integers(0, p, (300, 4))
    expect = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(300)) % p for j in range(4)]
              for i in range(5)]
    assert field.matmul(a, b, p).tolist() == expect


def test_least_nonzero_is_little_endian_minimum():
    basis = np.array([[1, 1, 0], [0, 0, 1]])
    brute = [v for v in field.all_vectors(3, 3)
             if v.any() and field.subspace_contains(basis, v, 3)]
    best = min(brute, key=lambda v: field.encode(v, 3))
    assert field.least_nonzero(basis, 3, 3).tolist() == best.tolist()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_idempotent(data):
    p, m = data
    once = field.rref(m, p)
    twice = field.rref(once.matrix, p)
    assert np.array_equal(once.matrix, twice.matrix)
    assert once.pivots == twice.pivots


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(data):
    p, m = data
    ker = field.nullspace(m, p)
    assert field.rank(m, p) + ker.shape[0] == m.shape[1]
    if ker.shape[0]:
        assert not field.matmul(m, ker.T, p).any()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_blocked_nullspace_matches_one_shot(data, draw):
    p, m = data
    rows = draw.draw(st.integers(1, 3))
    blocks = (m[i:i + rows] for i in range(0, m.shape[0], rows))
    assert np.array_equal(field.nullspace(blocks, p, n=m.shape[1]), field.nullspace(m, p))


@settings(max_examples=80, deadline=None)
@given(matrices(), st.data())
def test_solve_affine_residual(data, draw):
    p, a = data
    x = np.array(draw.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1],
                                    max_size=a.shape[1])), dtype=np.int64)
    b = field.matmul(a, x, p)
    sol = field.solve_affine(a, b, p)
    assert np.array_equal(field.matmul(a, sol.particular, p), b)
    for k in sol.kernel_basis:
        assert not field.matmul(a, k, p).any()
