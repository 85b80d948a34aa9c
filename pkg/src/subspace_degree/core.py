"""Tensor formats, rank profiles and flattening index bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import prod
from typing import Iterator, Sequence


class RankNotRealizable(ValueError):
    """No tensor of the given format has multilinear rank exactly ``k``."""


@dataclass(frozen=True)
class FormatProfile:
    """Ambient dimensions ``n`` together with multilinear rank bounds ``k``.

    Both are stored as tuples; ``N``, ``K`` and ``D`` are derived on access.
    """

    k: tuple[int, ...]
    n: tuple[int, ...]

    def __init__(self, k: Sequence[int], n: Sequence[int]):
        k = tuple(int(x) for x in k)
        n = tuple(int(x) for x in n)
        if len(k) == 0 or len(k) != len(n):
            raise ValueError(f"k and n must be non-empty and of equal length, got k={k}, n={n}")
        for ki, ni in zip(k, n):
            if ki < 1 or ni < 1:
                raise ValueError(f"entries of k and n must be positive, got k={k}, n={n}")
            if ki > ni:
                raise ValueError(f"rank bound exceeds dimension: k={k}, n={n}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)

    @property
    def d(self) -> int:
        return len(self.k)

    @property
    def N(self) -> int:
        return prod(self.n) - 1

    @property
    def K(self) -> int:
        return prod(self.k) - 1

    @property
    def D(self) -> int:
        return sum(ki * (ni - ki) for ki, ni in zip(self.k, self.n))

    @property
    def codims(self) -> tuple[int, ...]:
        """Exponents ``n_i - k_i`` of the Gram determinants."""
        return tuple(ni - ki for ki, ni in zip(self.k, self.n))

    @property
    def grassmannian_dims(self) -> tuple[int, ...]:
        return tuple(ki * (ni - ki) for ki, ni in zip(self.k, self.n))

    def permuted(self, perm: Sequence[int]) -> "FormatProfile":
        return FormatProfile([self.k[i] for i in perm], [self.n[i] for i in perm])

    @property
    def key(self) -> str:
        return "k={};n={}".format(",".join(map(str, self.k)), ",".join(map(str, self.n)))

    def __str__(self) -> str:
        return f"k=({','.join(map(str, self.k))}) n=({','.join(map(str, self.n))})"


def derive_scalars(p: FormatProfile) -> tuple[int, int, int]:
    """Return ``(N, K, D)``."""
    return p.N, p.K, p.D


def is_realizable(p: FormatProfile) -> bool:
    """True iff some tensor in the format has multilinear rank exactly ``k``.

    A generic core tensor of shape ``k`` has mode-``i`` rank
    ``min(k_i, prod_{j != i} k_j)``, so the condition is ``k_i <= prod_{j != i} k_j``.
    """
    total = prod(p.k)
    return all(ki * ki <= total for ki in p.k)


def dimension(p: FormatProfile) -> int:
    """Complex dimension ``D + K`` of the subspace variety."""
    if not is_realizable(p):
        raise RankNotRealizable(f"multilinear rank {p.k} is not realizable")
    return p.D + p.K


# -- multi-indices ----------------------------------------------------------

def linearize(idx: Sequence[int], bounds: Sequence[int]) -> int:
    """Flat offset of a 1-based multi-index; the first mode varies slowest."""
    if len(idx) != len(bounds):
        raise ValueError("index and bounds differ in length")
    off = 0
    for i, b in zip(idx, bounds):
        if not 1 <= i <= b:
            raise IndexError(f"index {tuple(idx)} out of bounds {tuple(bounds)}")
        off = off * b + (i - 1)
    return off


def delinearize(offset: int, bounds: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`linearize`."""
    if not 0 <= offset < prod(bounds):
        raise IndexError(f"offset {offset} out of range for bounds {tuple(bounds)}")
    out = []
    for b in reversed(bounds):
        offset, r = divmod(offset, b)
        out.append(r + 1)
    return tuple(reversed(out))


def multi_indices(bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All 1-based multi-indices within ``bounds`` in lexicographic order."""
    return product(*(range(1, b + 1) for b in bounds))


@dataclass(frozen=True)
class FlatteningIndexer:
    """Maps ``(row, col)`` of the mode-``mode`` flattening to a flat offset.

    ``mode`` is 1-based. Rows are indexed by ``i_mode``; columns run over the
    remaining indices in lexicographic order, earlier modes varying slower.
    """

    bounds: tuple[int, ...]
    mode: int

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(self.bounds))
        if not 1 <= self.mode <= len(self.bounds):
            raise ValueError(f"mode {self.mode} out of range 1..{len(self.bounds)}")

    @property
    def rows(self) -> int:
        return self.bounds[self.mode - 1]

    @property
    def cols(self) -> int:
        return prod(self.bounds) // self.rows

    @cached_property
    def _table(self) -> tuple[tuple[int, ...], ...]:
        rest = self.bounds[: self.mode - 1] + self.bounds[self.mode:]
        table = []
        for r in range(1, self.rows + 1):
            row = []
            for other in multi_indices(rest):
                idx = other[: self.mode - 1] + (r,) + other[self.mode - 1:]
                row.append(linearize(idx, self.bounds))
            table.append(tuple(row))
        return tuple(table)

    def offset(self, row: int, col: int) -> int:
        """Offset for 0-based ``row`` and ``col``."""
        return self._table[row][col]

    def row_offsets(self, row: int) -> tuple[int, ...]:
        return self._table[row]
