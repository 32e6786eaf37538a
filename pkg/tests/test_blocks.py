import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmalg import catalog, field
from gmalg.blocks import (KEYS, RequiresCommuting, _sym_from_components, block_components,
                          constructive_decomposition, lemma_checks, raw_components)
from gmalg.traces import (BilinearMap, decomposition_residual, left_product_map, product_map,
                          trace_space_vectors, vector_to_sym)

G425 = catalog.full(4, 2, 5)


def sym(t):
    return (t + t.transpose(1, 0, 2)) * 3 % 5  # 3 = 1/2 mod 5


def test_product_components():
    g = G425
    ctx = g.context
    bc = block_components(g, product_map(g.flat))
    expected = {
        ("f", 1, 1): sym(ctx.A.mult),
        ("f", 2, 3): ctx.phi,
        ("g", 1, 2): ctx.M.left,
        ("g", 2, 4): ctx.M.right,
        ("h", 1, 3): ctx.N.right.transpose(1, 0, 2),
        ("h", 3, 4): ctx.N.left.transpose(1, 0, 2),
        ("k", 2, 3): ctx.psi.transpose(1, 0, 2),
        ("k", 4, 4): sym(ctx.B.mult),
    }
    for name in "fghk":
        for i, j in KEYS:
            got = bc.component(name, i, j)
            want = expected.get((name, i, j))
            if want is None:
                assert not got.any(), (name, i, j)
            else:
                assert np.array_equal(got, want % 5), (name, i, j)
    dv = bc.derived
    assert dv.epsilon.tolist() == [1, 0, 0, 1]
    assert dv.epsilon_p.tolist() == [1, 0, 0, 1]
    for t in (dv.alpha, dv.tau, dv.gamma, dv.gamma_p, dv.delta):
        assert not t.any()


def test_zero_trace_components():
    g = G425
    bc = block_components(g, BilinearMap(np.zeros((16, 16, 16), dtype=np.int64), 5))
    assert not bc.derived.epsilon.any() and not bc.derived.epsilon_p.any()
    assert all(lemma_checks(g, bc).values())


def test_product_satisfies_all_relations():
    g = G425
    q = product_map(g.flat)
    bc = block_components(g, q)
    checks = lemma_checks(g, bc)
    assert checks and all(checks.values()), [k for k, v in checks.items() if not v]
    dec = constructive_decomposition(g, bc)
    assert not decomposition_residual(g, q, dec).any()


def test_noncommuting_trace_is_refused():
    g = G425
    q = left_product_map(g.flat, g.element(a=[1, 0, 0, 0]))
    with pytest.raises(RequiresCommuting):
        block_components(g, q)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_components_reassemble_symmetric_part(data):
    g = catalog.full(3, 1, 5)
    d = g.dim
    t = np.array(data.draw(st.lists(st.integers(0, 4), min_size=d ** 3, max_size=d ** 3))).reshape(d, d, d)
    q = BilinearMap(t, 5)
    assert np.array_equal(_sym_from_components(g, raw_components(g, q)), q.symmetric_part().tensor)


@functools.cache
def commuting_basis(args):
    return trace_space_vectors(catalog.full(*args))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_commuting_traces_satisfy_relations(data):
    # both corners noncommutative with Z(A), Z(B) scalar: the setting where the relations hold
    g = G425
    vecs = commuting_basis((4, 2, 5))
    coeffs = data.draw(st.lists(st.integers(0, 4), min_size=vecs.shape[0], max_size=vecs.shape[0]))
    q = vector_to_sym(field.matmul(np.array(coeffs)[None], vecs, 5)[0], g.dim, 5)
    bc = block_components(g, q, check=False)
    checks = lemma_checks(g, bc)
    assert all(checks.values()), [k for k, v in checks.items() if not v]
    dec = constructive_decomposition(g, bc)
    assert not decomposition_residual(g, q, dec).any()
