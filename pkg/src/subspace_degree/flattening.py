"""Symbolic flattenings of a generic core tensor and their Gram determinants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .core import FlatteningIndexer, FormatProfile, delinearize
from .polyring import DEFAULT_BITS, SparsePolynomial, exact_div, poly_add, poly_mul


@dataclass(frozen=True)
class SymbolicMatrix:
    rows: int
    cols: int
    entries: tuple[SparsePolynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[SparsePolynomial]]) -> "SymbolicMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged or empty matrix")
        return cls(len(rows), len(rows[0]), tuple(e for r in rows for e in r))

    def __getitem__(self, rc: tuple[int, int]) -> SparsePolynomial:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> list[SparsePolynomial]:
        return list(self.entries[r * self.cols:(r + 1) * self.cols])

    def to_rows(self) -> list[list[SparsePolynomial]]:
        return [self.row(r) for r in range(self.rows)]

    def transpose(self) -> "SymbolicMatrix":
        return SymbolicMatrix(self.cols, self.rows,
                              tuple(self[r, c] for c in range(self.cols) for r in range(self.rows)))

    def swap_blocks(self) -> "SymbolicMatrix":
        return SymbolicMatrix(self.rows, self.cols, tuple(e.swap_blocks() for e in self.entries))


def _variable(block: str, offset: int, nvars: int, bits: int) -> SparsePolynomial:
    if block == "a":
        return SparsePolynomial.x(offset, nvars, bits)
    if block == "b":
        return SparsePolynomial.y(offset, nvars, bits)
    raise ValueError(f"block must be 'a' or 'b', got {block!r}")


def generic_flattening(block: str, p: FormatProfile, mode: int, bits: int = DEFAULT_BITS) -> SymbolicMatrix:
    """Mode-``mode`` flattening (1-based) of the generic ``k_1 x ... x k_d`` tensor.

    Entry ``(r, c)`` is the variable of ``block`` whose flat offset is given by
    :class:`FlatteningIndexer`.
    """
    idx = FlatteningIndexer(p.k, mode)
    nvars = p.K + 1
    entries = [_variable(block, idx.offset(r, c), nvars, bits)
               for r in range(idx.rows) for c in range(idx.cols)]
    return SymbolicMatrix(idx.rows, idx.cols, tuple(entries))


def gram_product(mode: int, p: FormatProfile, bits: int = DEFAULT_BITS) -> SymbolicMatrix:
    """The ``k_mode x k_mode`` matrix ``A^(mode) (B^(mode))^T``.

    Built entry by entry from the indexer, so no flattening is materialised.
    """
    idx = FlatteningIndexer(p.k, mode)
    nvars = p.K + 1
    shift = bits * nvars
    entries = []
    for r in range(idx.rows):
        ra = idx.row_offsets(r)
        for s in range(idx.rows):
            rb = idx.row_offsets(s)
            terms = {(1 << (bits * i)) | (1 << (shift + bits * j)): 1 for i, j in zip(ra, rb)}
            entries.append(SparsePolynomial(nvars, terms, bits, 1))
    return SymbolicMatrix(idx.rows, idx.rows, tuple(entries))


def _cofactor_det(rows: list[list[SparsePolynomial]]) -> SparsePolynomial:
    n = len(rows)
    nvars, bits = rows[0][0].nvars, rows[0][0].bits

    # Laplace expansion along rows, memoised on the set of remaining columns
    @lru_cache(maxsize=None)
    def minor(r: int, cols: tuple[int, ...]) -> SparsePolynomial:
        if r == n - 1:
            return rows[r][cols[0]]
        total = SparsePolynomial.zero(nvars).repacked(bits)
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            term = poly_mul(entry, sub)
            total = poly_add(total, -term if pos % 2 else term)
        return total

    return minor(0, tuple(range(n)))


def _bareiss_det(rows: list[list[SparsePolynomial]]) -> SparsePolynomial:
    m = [list(r) for r in rows]
    n = len(m)
    nvars = m[0][0].nvars
    sign = 1
    prev = SparsePolynomial.one(nvars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return SparsePolynomial.zero(nvars)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = poly_mul(pivot, m[i][j]) - poly_mul(m[i][k], m[k][j])
                m[i][j] = exact_div(num, prev) if k else num
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def symbolic_determinant(M: SymbolicMatrix, strategy: str = "auto") -> SparsePolynomial:
    """Exact determinant of a square symbolic matrix.

    ``strategy`` is ``"cofactor"``, ``"fraction-free"`` (Bareiss elimination
    with exact polynomial divisions) or ``"auto"`` (cofactor up to 4x4).
    """
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    if strategy == "auto":
        strategy = "cofactor" if M.rows <= 4 else "fraction-free"
    rows = M.to_rows()
    if M.rows == 1:
        return rows[0][0]
    if strategy == "cofactor":
        return _cofactor_det(rows)
    if strategy == "fraction-free":
        return _bareiss_det(rows)
    raise ValueError(f"unknown determinant strategy {strategy!r}")


def variable_name(block: str, offset: int, k: Sequence[int]) -> str:
    return f"{block}_{{{','.join(map(str, delinearize(offset, k)))}}}"


def format_flattening(M: SymbolicMatrix, p: FormatProfile, block: str = "a") -> str:
    """Render a flattening with 1-based multi-index variable names, one row per line."""
    lines = []
    for row in M.to_rows():
        names = []
        for e in row:
            ((ev, c),) = e.items()
            if c != 1:
                raise ValueError("not a flattening matrix entry")
            exps = ev.a if block == "a" else ev.b
            names.append(variable_name(block, exps.index(1), p.k))
        lines.append(" ".join(names))
    return "\n".join(lines)
