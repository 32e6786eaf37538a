"""Built-in instances."""

from __future__ import annotations

import numpy as np

from .algebra import Algebra, LinearMap, diagonal_algebra
from .gma import (Bimodule, Gma, build_block_partition, build_from_idempotent,
                  build_triangular, build_upper_triangular)


def full(n: int, k: int, p: int) -> Gma:
    """M_n(F_p) split into k and n − k blocks."""
    return build_block_partition(n, k, p)


def triangular(n: int, p: int) -> Gma:
    """T_n(F_p) as [F_p, F_p^{1×(n−1)}; 0, T_{n−1}(F_p)]."""
    return build_upper_triangular(n, p, 1)


def peirce(a: Algebra, e) -> Gma:
    return build_from_idempotent(a, e)


def nonloyal_demo(p: int) -> Gma:
    """A = B = F_p ⊕ F_p acting coordinatewise on M = F_p ⊕ F_p, N = 0.

    M is faithful on both sides but not loyal: (1, 0)·M·(0, 1) = 0.
    """
    A = diagonal_algebra(2, p)
    B = diagonal_algebra(2, p)
    act = np.zeros((2, 2, 2), dtype=np.int64)
    for i in range(2):
        act[i, i, i] = 1
    M = Bimodule(A, B, 2, act, act)
    g = build_triangular(A, M, B)
    g.meta["name"] = f"nonloyal-demo {p}"
    return g


def nonloyal_demo_map(g: Gma) -> LinearMap:
    """x ↦ e·x for the idempotent e = ((1, 0), 0; 0, 0): commuting fails at x = m_1 + b_1."""
    e = g.element(a=[1, 0])
    return LinearMap(g.flat.left_matrix(e), g.p)
