from itertools import permutations, product
from math import prod

import numpy as np
import pytest

from subspace_degree.core import (
    FlatteningIndexer,
    FormatProfile,
    RankNotRealizable,
    delinearize,
    derive_scalars,
    dimension,
    is_realizable,
    linearize,
    multi_indices,
)


def small_shapes(max_prod, max_d=4, max_k=4):
    for d in range(1, max_d + 1):
        for k in product(range(1, max_k + 1), repeat=d):
            if prod(k) <= max_prod:
                yield k


def test_derive_scalars_examples():
    assert derive_scalars(FormatProfile((1, 2, 2), (3, 3, 3))) == (26, 3, 6)
    assert derive_scalars(FormatProfile((2, 2, 2), (2, 2, 2))) == (7, 7, 0)
    n = (4, 2, 5, 3)
    assert derive_scalars(FormatProfile((1,) * 4, n)) == (prod(n) - 1, 0, sum(x - 1 for x in n))


def test_scalars_are_big_integers():
    p = FormatProfile((1,) * 8, (1000,) * 8)
    assert p.N == 1000 ** 8 - 1
    assert p.N > 2 ** 63


@pytest.mark.parametrize("k,n", [((1, 2, 2), (3, 3, 3)), ((2, 1, 3, 2), (4, 2, 3, 5)), ((1, 3), (2, 4))])
def test_scalars_invariant_under_mode_permutation(k, n):
    p = FormatProfile(k, n)
    for perm in permutations(range(p.d)):
        assert derive_scalars(p.permuted(perm)) == derive_scalars(p)


@pytest.mark.parametrize("k,n", [((), ()), ((1,), (1, 2)), ((0,), (1,)), ((3,), (2,))])
def test_invalid_profiles(k, n):
    with pytest.raises(ValueError):
        FormatProfile(k, n)


def test_dimension():
    assert dimension(FormatProfile((1, 2, 2), (3, 3, 3))) == 9
    assert dimension(FormatProfile((1, 1, 1), (2, 2, 2))) == 3
    p = FormatProfile((2, 3, 3), (2, 3, 3))
    assert dimension(p) == p.N
    with pytest.raises(RankNotRealizable):
        dimension(FormatProfile((1, 1, 2), (2, 2, 2)))


def test_realizability_examples():
    for n3 in (2, 3, 5):
        assert not is_realizable(FormatProfile((1, 1, 2), (3, 3, n3)))
    assert is_realizable(FormatProfile((2, 2, 2), (3, 3, 3)))
    assert not is_realizable(FormatProfile((1, 2), (3, 3)))
    assert not is_realizable(FormatProfile((3, 2), (3, 3)))
    assert is_realizable(FormatProfile((2, 2), (3, 3)))
    assert is_realizable(FormatProfile((2,), (3,))) is False
    assert is_realizable(FormatProfile((1,), (3,)))


def _numeric_mlrank(k, n, rng):
    core = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    T = core
    for mode, (ki, ni) in enumerate(zip(k, n)):
        A = rng.standard_normal((ni, ki)) + 1j * rng.standard_normal((ni, ki))
        T = np.moveaxis(np.tensordot(A, T, axes=(1, mode)), 0, mode)
    return tuple(
        np.linalg.matrix_rank(np.moveaxis(T, mode, 0).reshape(n[mode], -1), tol=1e-8)
        for mode in range(len(k))
    )


def test_realizability_matches_numeric_search():
    rng = np.random.default_rng(7)
    for k in small_shapes(16):
        n = tuple(ki + 1 for ki in k)
        found = any(_numeric_mlrank(k, n, rng) == k for _ in range(3))
        assert is_realizable(FormatProfile(k, n)) == found, k


def test_linearize_roundtrip_exhaustive():
    for bounds in small_shapes(256, max_d=4, max_k=6):
        for off, idx in enumerate(multi_indices(bounds)):
            assert linearize(idx, bounds) == off
            assert delinearize(off, bounds) == idx


def test_linearize_bounds():
    with pytest.raises(IndexError):
        linearize((3, 1), (2, 2))
    with pytest.raises(IndexError):
        delinearize(4, (2, 2))


def test_indexer_matches_reference_layout():
    # layout of the generic 2x2x2 tensor's three flattenings, 1-based indices
    expected = {
        1: [["111", "112", "121", "122"], ["211", "212", "221", "222"]],
        2: [["111", "112", "211", "212"], ["121", "122", "221", "222"]],
        3: [["111", "121", "211", "221"], ["112", "122", "212", "222"]],
    }
    bounds = (2, 2, 2)
    for mode, rows in expected.items():
        idx = FlatteningIndexer(bounds, mode)
        for r, row in enumerate(rows):
            for c, name in enumerate(row):
                assert idx.offset(r, c) == linearize(tuple(int(ch) for ch in name), bounds)


def test_indexer_is_a_bijection():
    for bounds in small_shapes(64):
        for mode in range(1, len(bounds) + 1):
            idx = FlatteningIndexer(bounds, mode)
            offs = [idx.offset(r, c) for r in range(idx.rows) for c in range(idx.cols)]
            assert sorted(offs) == list(range(prod(bounds)))


def test_indexer_mode_range():
    with pytest.raises(ValueError):
        FlatteningIndexer((2, 2), 3)
