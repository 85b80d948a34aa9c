from itertools import combinations, product
from math import prod
from pathlib import Path

import numpy as np
import pytest

from subspace_degree.core import FormatProfile
from subspace_degree.flattening import (
    SymbolicMatrix,
    format_flattening,
    generic_flattening,
    gram_product,
    symbolic_determinant,
)
from subspace_degree.polyring import ExponentVector, SparsePolynomial

GOLDEN = Path(__file__).parent / "golden"


def shapes(max_prod, max_d=4):
    for d in range(1, max_d + 1):
        for k in product(range(1, 5), repeat=d):
            if prod(k) <= max_prod:
                yield k


def test_flattenings_2x2x2_layout():
    p = FormatProfile((2, 2, 2), (2, 2, 2))
    got = [format_flattening(generic_flattening("a", p, m), p) for m in (1, 2, 3)]
    assert got[0] == "a_{1,1,1} a_{1,1,2} a_{1,2,1} a_{1,2,2}\na_{2,1,1} a_{2,1,2} a_{2,2,1} a_{2,2,2}"
    assert got[1] == "a_{1,1,1} a_{1,1,2} a_{2,1,1} a_{2,1,2}\na_{1,2,1} a_{1,2,2} a_{2,2,1} a_{2,2,2}"
    assert got[2] == "a_{1,1,1} a_{1,2,1} a_{2,1,1} a_{2,2,1}\na_{1,1,2} a_{1,2,2} a_{2,1,2} a_{2,2,2}"
    b = format_flattening(generic_flattening("b", p, 1), p, "b")
    assert b.startswith("b_{1,1,1} b_{1,1,2}")


def test_flattening_entries_are_single_variables():
    for k in shapes(32):
        p = FormatProfile(k, k)
        for mode in range(1, p.d + 1):
            M = generic_flattening("a", p, mode)
            assert (M.rows, M.cols) == (k[mode - 1], prod(k) // k[mode - 1])
            seen = []
            for e in M.entries:
                ((ev, c),) = e.items()
                assert c == 1 and sum(ev.a) == 1 and sum(ev.b) == 0
                seen.append(ev.a.index(1))
            assert sorted(seen) == list(range(prod(k)))


def test_flattening_mode_out_of_range():
    p = FormatProfile((2, 2), (2, 2))
    with pytest.raises(ValueError):
        generic_flattening("a", p, 0)
    with pytest.raises(ValueError):
        gram_product(3, p)
    with pytest.raises(ValueError):
        generic_flattening("c", p, 1)


def test_gram_product_examples():
    p = FormatProfile((1, 1), (2, 2))
    G = gram_product(1, p)
    assert (G.rows, G.cols) == (1, 1)
    assert G[0, 0] == SparsePolynomial.x(0, 1) * SparsePolynomial.y(0, 1)

    p = FormatProfile((2, 2, 2), (3, 3, 3))
    G = gram_product(1, p)
    x = [SparsePolynomial.x(i, 8) for i in range(8)]
    y = [SparsePolynomial.y(i, 8) for i in range(8)]
    # offsets of a_111, a_112, a_121, a_122 are 0..3
    assert G[0, 0] == sum((x[i] * y[i] for i in range(4)), SparsePolynomial.zero(8))


def test_gram_product_matches_symbolic_product_of_flattenings():
    for k in [(2, 3), (2, 2, 2), (1, 3, 2)]:
        p = FormatProfile(k, k)
        for mode in range(1, p.d + 1):
            A = generic_flattening("a", p, mode)
            B = generic_flattening("b", p, mode)
            G = gram_product(mode, p)
            for r in range(A.rows):
                for s in range(A.rows):
                    ref = SparsePolynomial.zero(p.K + 1)
                    for c in range(A.cols):
                        ref = ref + A[r, c] * B[s, c]
                    assert G[r, s] == ref


def test_gram_entry_structure():
    for k in shapes(32):
        p = FormatProfile(k, k)
        for mode in range(1, p.d + 1):
            cols = prod(k) // k[mode - 1]
            for e in gram_product(mode, p).entries:
                assert len(e) == cols
                assert all(c == 1 and ev.bidegree == (1, 1) for ev, c in e.items())


def test_gram_swap_transpose_symmetry():
    for k in [(2, 2), (2, 3, 2), (3, 1, 2)]:
        p = FormatProfile(k, k)
        for mode in range(1, p.d + 1):
            G = gram_product(mode, p)
            assert G.swap_blocks().transpose() == G


def _vars(n):
    return [SparsePolynomial.x(i, n) for i in range(n)]


def test_determinant_small():
    p, q, r, s = _vars(4)
    assert symbolic_determinant(SymbolicMatrix.from_rows([[q]])) == q
    M = SymbolicMatrix.from_rows([[p, q], [r, s]])
    for strategy in ("cofactor", "fraction-free"):
        assert symbolic_determinant(M, strategy) == p * s - q * r
    with pytest.raises(ValueError):
        symbolic_determinant(SymbolicMatrix.from_rows([[p, q]]))
    with pytest.raises(ValueError):
        symbolic_determinant(M, "laplace")


def test_gram_determinant_2x2_against_cauchy_binet():
    p = FormatProfile((2, 2), (3, 3))
    G = gram_product(1, p)
    d_cof = symbolic_determinant(G, "cofactor")
    d_ff = symbolic_determinant(G, "fraction-free")
    assert d_cof == d_ff
    assert d_cof.is_bihomogeneous((2, 2))
    # sum over column pairs of products of 2x2 minors
    x, y = (SparsePolynomial.x(i, 4) for i in range(4)), (SparsePolynomial.y(i, 4) for i in range(4))
    x, y = list(x), list(y)
    A = [[x[0], x[1]], [x[2], x[3]]]
    B = [[y[0], y[1]], [y[2], y[3]]]
    ref = SparsePolynomial.zero(4)
    for i, j in combinations(range(2), 2):
        ref = ref + (A[0][i] * A[1][j] - A[0][j] * A[1][i]) * (B[0][i] * B[1][j] - B[0][j] * B[1][i])
    assert d_cof == ref
    assert d_cof.to_text() == (GOLDEN / "det_gram_k22_mode1.txt").read_text()


def test_generic_symbolic_determinant_3x3():
    v = _vars(9)
    M = SymbolicMatrix.from_rows([v[0:3], v[3:6], v[6:9]])
    det = symbolic_determinant(M, "cofactor")
    assert len(det) == 6
    assert det == symbolic_determinant(M, "fraction-free")


def _random_poly(rng, nvars, max_terms=4):
    terms = {}
    for _ in range(rng.integers(0, max_terms + 1)):
        a = tuple(int(e) for e in rng.integers(0, 3, nvars))
        b = tuple(int(e) for e in rng.integers(0, 3, nvars))
        terms[ExponentVector(a, b)] = int(rng.integers(-5, 6))
    return SparsePolynomial.from_terms(nvars, {e: c for e, c in terms.items() if c})


@pytest.mark.parametrize("size", [2, 3, 4])
def test_cofactor_equals_fraction_free_random(size):
    rng = np.random.default_rng(size)
    for _ in range(40 if size < 4 else 10):
        M = SymbolicMatrix.from_rows([[_random_poly(rng, 2) for _ in range(size)] for _ in range(size)])
        assert symbolic_determinant(M, "cofactor") == symbolic_determinant(M, "fraction-free")


def test_fraction_free_handles_zero_pivots():
    a, b, c, d = _vars(4)
    z = SparsePolynomial.zero(4)
    M = SymbolicMatrix.from_rows([[z, a, b], [c, z, d], [a, b, z]])
    assert symbolic_determinant(M, "fraction-free") == symbolic_determinant(M, "cofactor")
    singular = SymbolicMatrix.from_rows([[z, a], [z, b]])
    assert symbolic_determinant(singular, "fraction-free").is_zero()


def test_gram_determinant_numeric_agreement():
    rng = np.random.default_rng(3)
    p = FormatProfile((2, 3, 2), (2, 3, 2))
    T = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    for mode in range(1, 4):
        det = symbolic_determinant(gram_product(mode, p))
        val = det.evaluate(T, np.conj(T))
        M = np.moveaxis(T.reshape(p.k), mode - 1, 0).reshape(p.k[mode - 1], -1)
        assert np.isclose(val, np.linalg.det(M @ M.conj().T).real, rtol=1e-10)
