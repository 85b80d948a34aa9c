"""Exact sparse polynomials in two blocks of variables ``x_0..x_K`` and ``y_0..y_K``.

Monomials are packed into a single Python integer: the exponent of ``x_i``
lives in bit field ``i`` and the exponent of ``y_i`` in field ``nvars + i``,
each field ``bits`` wide. Multiplying monomials is then integer addition, and
the diagonal test ``alpha == beta`` is one comparison of the two halves.
Coefficients are arbitrary precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import factorial
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "ExponentVector",
    "SparsePolynomial",
    "ExactRational",
    "ResourceExceeded",
    "factorial",
    "poly_add",
    "poly_mul",
    "poly_pow",
    "naive_mul",
    "exact_div",
]

# Fractions are always kept in lowest terms with a positive denominator.
ExactRational = Fraction

DEFAULT_BITS = 8


class ResourceExceeded(MemoryError):
    """A polynomial grew past the configured term cap."""


@total_ordering
@dataclass(frozen=True)
class ExponentVector:
    """Exponents of the x-block (``a``) and y-block (``b``) of one monomial.

    Ordered graded-lexicographically on the concatenation ``a + b``.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("a and b blocks must have equal length")
        if any(e < 0 for e in self.a) or any(e < 0 for e in self.b):
            raise ValueError("exponents must be non-negative")

    @property
    def bidegree(self) -> tuple[int, int]:
        return sum(self.a), sum(self.b)

    @property
    def is_diagonal(self) -> bool:
        return self.a == self.b

    def sort_key(self) -> tuple:
        return (sum(self.a) + sum(self.b), self.a + self.b)

    def __lt__(self, other: "ExponentVector") -> bool:
        return self.sort_key() < other.sort_key()

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        return ExponentVector(
            tuple(i + j for i, j in zip(self.a, other.a)),
            tuple(i + j for i, j in zip(self.b, other.b)),
        )


def _pack(fields: Iterable[int], bits: int) -> int:
    key = 0
    for i, e in enumerate(fields):
        if e >= 1 << (bits - 1):
            raise OverflowError(f"exponent {e} does not fit in {bits}-bit field")
        key |= e << (bits * i)
    return key


def _unpack(key: int, nfields: int, bits: int) -> tuple[int, ...]:
    mask = (1 << bits) - 1
    return tuple((key >> (bits * i)) & mask for i in range(nfields))


def _bits_for(degree: int) -> int:
    # one spare bit keeps signed exponent differences decodable
    return max(DEFAULT_BITS, degree.bit_length() + 1)


class SparsePolynomial:
    """Integer polynomial in ``x_0..x_{nvars-1}``, ``y_0..y_{nvars-1}``.

    Instances are treated as immutable values. ``terms`` maps packed monomial
    keys to non-zero integer coefficients and should not be mutated.
    """

    __slots__ = ("nvars", "bits", "terms", "_bideg", "_bound")

    def __init__(self, nvars: int, terms: dict[int, int] | None = None,
                 bits: int = DEFAULT_BITS, degree_bound: int | None = None):
        self.nvars = nvars
        self.bits = bits
        self.terms = {} if terms is None else terms
        self._bideg: tuple[int, int] | None = None
        # upper bound on both block degrees, used to decide repacking
        self._bound = degree_bound

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePolynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c: int, bits: int = DEFAULT_BITS) -> "SparsePolynomial":
        return cls(nvars, {0: int(c)} if c else {}, bits)

    @classmethod
    def one(cls, nvars: int, bits: int = DEFAULT_BITS) -> "SparsePolynomial":
        return cls.constant(nvars, 1, bits)

    @classmethod
    def x(cls, i: int, nvars: int, bits: int = DEFAULT_BITS) -> "SparsePolynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"x-variable {i} out of range")
        return cls(nvars, {1 << (bits * i): 1}, bits)

    @classmethod
    def y(cls, i: int, nvars: int, bits: int = DEFAULT_BITS) -> "SparsePolynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"y-variable {i} out of range")
        return cls(nvars, {1 << (bits * (nvars + i)): 1}, bits)

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[ExponentVector, int] | Iterable[tuple[ExponentVector, int]],
                   bits: int | None = None) -> "SparsePolynomial":
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        for ev, _ in items:
            if len(ev.a) != nvars:
                raise ValueError(f"exponent vector {ev} has wrong arity for nvars={nvars}")
        if bits is None:
            top = max((max(ev.a + ev.b, default=0) for ev, _ in items), default=0)
            bits = _bits_for(top)
        out: dict[int, int] = {}
        for ev, c in items:
            key = _pack(ev.a + ev.b, bits)
            out[key] = out.get(key, 0) + int(c)
        return cls(nvars, {k: c for k, c in out.items() if c}, bits)

    # -- inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def exponent(self, key: int) -> ExponentVector:
        f = _unpack(key, 2 * self.nvars, self.bits)
        return ExponentVector(f[: self.nvars], f[self.nvars:])

    def items(self) -> Iterator[tuple[ExponentVector, int]]:
        """Terms in descending graded-lex order."""
        pairs = [(self.exponent(k), c) for k, c in self.terms.items()]
        pairs.sort(key=lambda t: t[0].sort_key(), reverse=True)
        return iter(pairs)

    def as_dict(self) -> dict[ExponentVector, int]:
        return {self.exponent(k): c for k, c in self.terms.items()}

    def coefficient(self, ev: ExponentVector) -> int:
        if max(ev.a + ev.b, default=0) >= 1 << (self.bits - 1):
            return 0
        return self.terms.get(_pack(ev.a + ev.b, self.bits), 0)

    @property
    def bidegree(self) -> tuple[int, int]:
        """Maximal (x-degree, y-degree) over all terms; ``(0, 0)`` for zero."""
        if self._bideg is None:
            da = db = 0
            for k in self.terms:
                ev = self.exponent(k)
                da = max(da, sum(ev.a))
                db = max(db, sum(ev.b))
            self._bideg = (da, db)
        return self._bideg

    def _degree_bound(self) -> int:
        if self._bound is None:
            self._bound = max(self.bidegree)
        return self._bound

    def is_bihomogeneous(self, bideg: tuple[int, int] | None = None) -> bool:
        degs = {self.exponent(k).bidegree for k in self.terms}
        if bideg is not None:
            return degs <= {tuple(bideg)}
        return len(degs) <= 1

    def diagonal_items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(alpha, c)`` for every term ``c * x^alpha * y^alpha``."""
        shift = self.bits * self.nvars
        lo = (1 << shift) - 1
        for k, c in self.terms.items():
            if k & lo == k >> shift:
                yield _unpack(k & lo, self.nvars, self.bits), c

    # -- arithmetic -----------------------------------------------------------

    def repacked(self, bits: int) -> "SparsePolynomial":
        if bits == self.bits:
            return self
        nf = 2 * self.nvars
        out = {_pack(_unpack(k, nf, self.bits), bits): c for k, c in self.terms.items()}
        return SparsePolynomial(self.nvars, out, bits, self._bound)

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, int):
            return SparsePolynomial.constant(self.nvars, other, self.bits)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = _align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.as_dict().items()))

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, {k: -c for k, c in self.terms.items()}, self.bits, self._bound)

    def __add__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other) -> "SparsePolynomial":
        return (-self).__add__(other)

    def __mul__(self, other) -> "SparsePolynomial":
        if isinstance(other, int):
            if other == 0:
                return SparsePolynomial(self.nvars, {}, self.bits)
            return SparsePolynomial(self.nvars, {k: c * other for k, c in self.terms.items()},
                                    self.bits, self._bound)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "SparsePolynomial":
        return poly_pow(self, e)

    def swap_blocks(self) -> "SparsePolynomial":
        """Exchange the roles of the x- and y-variables."""
        shift = self.bits * self.nvars
        lo = (1 << shift) - 1
        out = {((k & lo) << shift) | (k >> shift): c for k, c in self.terms.items()}
        return SparsePolynomial(self.nvars, out, self.bits, self._bound)

    # -- numeric evaluation ---------------------------------------------------

    def exponent_arrays(self) -> tuple[np.ndarray, np.ndarray, list[int]]:
        """``(A, B, coeffs)`` with one row of exponents per term."""
        evs = [(self.exponent(k), c) for k, c in self.terms.items()]
        a = np.array([ev.a for ev, _ in evs], dtype=np.int64).reshape(len(evs), self.nvars)
        b = np.array([ev.b for ev, _ in evs], dtype=np.int64).reshape(len(evs), self.nvars)
        return a, b, [c for _, c in evs]

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Evaluate at points ``x`` and ``y`` of shape ``(..., nvars)``."""
        x = np.asarray(x)
        y = np.asarray(y)
        out = np.zeros(np.broadcast_shapes(x.shape[:-1], y.shape[:-1]), dtype=np.result_type(x, y, float))
        for k, c in self.terms.items():
            ev = self.exponent(k)
            term = np.full(out.shape, float(c), dtype=out.dtype)
            for i, e in enumerate(ev.a):
                if e:
                    term = term * x[..., i] ** e
            for i, e in enumerate(ev.b):
                if e:
                    term = term * y[..., i] ** e
            out = out + term
        return out

    # -- text form ------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical serialization, one term per line in descending graded-lex order."""
        lines = [f"nvars {self.nvars}"]
        for ev, c in self.items():
            lines.append(f"{c:+d} a={','.join(map(str, ev.a))} b={','.join(map(str, ev.b))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparsePolynomial":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "nvars":
            raise ValueError("missing 'nvars' header")
        nvars = int(head[1])

        def parse(block: str, tag: str) -> tuple[int, ...]:
            if not block.startswith(tag + "="):
                raise ValueError(f"malformed block {block!r}")
            body = block[len(tag) + 1:]
            return tuple(int(e) for e in body.split(",")) if body else ()

        terms = []
        for ln in lines[1:]:
            c, a, b = ln.split()
            terms.append((ExponentVector(parse(a, "a"), parse(b, "b")), int(c)))
        return cls.from_terms(nvars, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ev, c in self.items():
            mono = [f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(ev.a) if e]
            mono += [f"y{i}^{e}" if e > 1 else f"y{i}" for i, e in enumerate(ev.b) if e]
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(f"{c}*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")


def _align(p: SparsePolynomial, q: SparsePolynomial, bits: int = 0) -> tuple[SparsePolynomial, SparsePolynomial]:
    if p.nvars != q.nvars:
        raise ValueError(f"arity mismatch: {p.nvars} vs {q.nvars}")
    bits = max(bits, p.bits, q.bits)
    return p.repacked(bits), q.repacked(bits)


def poly_add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    p, q = _align(p, q)
    if len(p) < len(q):
        p, q = q, p
    out = dict(p.terms)
    for k, c in q.terms.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    bound = None
    if p._bound is not None and q._bound is not None:
        bound = max(p._bound, q._bound)
    return SparsePolynomial(p.nvars, out, p.bits, bound)


def poly_mul(p: SparsePolynomial, q: SparsePolynomial, max_terms: int | None = None) -> SparsePolynomial:
    """Exact product of ``p`` and ``q``.

    Raises :class:`ResourceExceeded` if the partial result exceeds ``max_terms``.
    """
    bound = p._degree_bound() + q._degree_bound()
    p, q = _align(p, q, _bits_for(bound))
    if len(p) < len(q):
        p, q = q, p
    out: dict[int, int] = {}
    get = out.get
    inner = list(q.terms.items())
    for k1, c1 in p.terms.items():
        for k2, c2 in inner:
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
        if max_terms is not None and len(out) > max_terms:
            raise ResourceExceeded(f"product exceeded {max_terms} terms")
    out = {k: c for k, c in out.items() if c}
    return SparsePolynomial(p.nvars, out, p.bits, bound)


def naive_mul(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    """Reference product: a double loop over unpacked exponent vectors."""
    if p.nvars != q.nvars:
        raise ValueError(f"arity mismatch: {p.nvars} vs {q.nvars}")
    acc: dict[ExponentVector, int] = {}
    for e1, c1 in p.as_dict().items():
        for e2, c2 in q.as_dict().items():
            e = e1 + e2
            acc[e] = acc.get(e, 0) + c1 * c2
    return SparsePolynomial.from_terms(p.nvars, {e: c for e, c in acc.items() if c})


def poly_pow(p: SparsePolynomial, e: int, method: str = "auto",
             max_terms: int | None = None) -> SparsePolynomial:
    """``p ** e``.

    ``method`` is ``"binary"`` (repeated squaring), ``"iterative"`` (e-1
    successive products) or ``"auto"``, which is iterative for ``e <= 4``.
    """
    if e < 0:
        raise ValueError("negative exponent")
    if method == "auto":
        method = "iterative" if e <= 4 else "binary"
    result = SparsePolynomial.one(p.nvars, p.bits)
    if e == 0:
        return result
    if method == "iterative":
        result = p
        for _ in range(e - 1):
            result = poly_mul(result, p, max_terms)
        return result
    if method != "binary":
        raise ValueError(f"unknown power method {method!r}")
    base = p
    first = True
    while e:
        if e & 1:
            result = base if first else poly_mul(result, base, max_terms)
            first = False
        e >>= 1
        if e:
            base = poly_mul(base, base, max_terms)
    return result


def exact_div(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    """Quotient ``p / q``, which must be exact over the integers.

    Plain multivariate division using the packed-key order, which is a
    lexicographic monomial order (the last y-variable most significant).
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p, q = _align(p, q)
    bits, nf = p.bits, 2 * p.nvars
    lead_q = max(q.terms)
    lead_c = q.terms[lead_q]
    lead_f = _unpack(lead_q, nf, bits)
    rem = dict(p.terms)
    quot: dict[int, int] = {}
    q_items = list(q.terms.items())
    while rem:
        lead = max(rem)
        f = _unpack(lead, nf, bits)
        if any(a < b for a, b in zip(f, lead_f)):
            raise ArithmeticError("division is not exact")
        c, r = divmod(rem[lead], lead_c)
        if r:
            raise ArithmeticError("division is not exact")
        m = lead - lead_q
        quot[m] = c
        for k, cq in q_items:
            kk = m + k
            s = rem.get(kk, 0) - c * cq
            if s:
                rem[kk] = s
            else:
                rem.pop(kk, None)
    return SparsePolynomial(p.nvars, quot, bits)
