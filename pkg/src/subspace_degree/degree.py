"""Exact degree of subspace varieties.

The degree of ``X_k`` factors as the product of the Plücker degrees of the
Grassmannians ``G(k_i, n_i)`` times a rational number ``f(k, n)``. The latter
is read off the bihomogeneous polynomial

    p(x, y) = prod_l det(A^(l) B^(l)^T) ** (n_l - k_l)

by summing its diagonal coefficients ``c_{alpha,alpha}`` weighted by
``alpha_0! ... alpha_K!`` and dividing by ``prod_l (k_l (n_l - k_l))!``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .core import FormatProfile, RankNotRealizable, is_realizable
from .flattening import gram_product, symbolic_determinant
from .polyring import ResourceExceeded, SparsePolynomial, _bits_for, _unpack, poly_mul, poly_pow

DEFAULT_MAX_TERMS = 50_000_000
METHODS = ("expand", "paired")


class IntegralityViolation(ArithmeticError):
    """The computed degree is not an integer, which indicates a bug."""


@dataclass(frozen=True)
class DegreeResult:
    profile: FormatProfile
    grass_degrees: tuple[int, ...]
    g_value: int
    f_value: Fraction
    degree: int | Fraction
    dimension: int
    term_count_of_p: int | None
    elapsed: float = field(compare=False)
    realizable: bool = True
    method: str = "expand"

    @property
    def f_denominator(self) -> int:
        return self.f_value.denominator

    def to_record(self) -> dict:
        """JSON-ready mapping; big integers and rationals become strings."""
        p = self.profile
        return {
            "k": list(p.k),
            "n": list(p.n),
            "N": p.N,
            "K": p.K,
            "D": p.D,
            "dimension": self.dimension,
            "grass_degrees": [str(g) for g in self.grass_degrees],
            "g": str(self.g_value),
            "f": f"{self.f_value.numerator}/{self.f_value.denominator}",
            "degree": str(self.degree) if isinstance(self.degree, int)
            else f"{self.degree.numerator}/{self.degree.denominator}",
            "realizable": self.realizable,
            "term_count_of_p": self.term_count_of_p,
            "method": self.method,
            "elapsed": self.elapsed,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "DegreeResult":
        degree = Fraction(rec["degree"])
        return cls(
            profile=FormatProfile(rec["k"], rec["n"]),
            grass_degrees=tuple(int(g) for g in rec["grass_degrees"]),
            g_value=int(rec["g"]),
            f_value=Fraction(rec["f"]),
            degree=int(degree) if degree.denominator == 1 else degree,
            dimension=int(rec["dimension"]),
            term_count_of_p=rec.get("term_count_of_p"),
            elapsed=float(rec.get("elapsed", 0.0)),
            realizable=bool(rec.get("realizable", True)),
            method=rec.get("method", "expand"),
        )


def grassmannian_degree(k: int, n: int) -> int:
    """Degree of ``G(k, n)`` in its Plücker embedding."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    num = factorial(k * (n - k))
    den = prod(prod(range(j, j + n - k)) for j in range(1, k + 1))
    q, r = divmod(num, den)
    if r:
        raise IntegralityViolation(f"deg G({k},{n}) = {num}/{den} is not an integer")
    return q


def segre_degree(n) -> int:
    """Degree of the Segre embedding of ``P^{n_1-1} x ... x P^{n_d-1}``."""
    if any(ni < 1 for ni in n):
        raise ValueError("dimensions must be positive")
    return factorial(sum(ni - 1 for ni in n)) // prod(factorial(ni - 1) for ni in n)


def determinantal_degree_oracle(k: int, n: int, m: int) -> int:
    """Degree of the variety of ``n x m`` matrices of rank at most ``k``."""
    if not 1 <= k <= min(n, m):
        raise ValueError(f"need 1 <= k <= min(n, m), got k={k}, n={n}, m={m}")
    val = Fraction(1)
    for i in range(n - k):
        val *= Fraction(factorial(m + i) * factorial(i), factorial(k + i) * factorial(m - k + i))
    if val.denominator != 1:
        raise IntegralityViolation(f"determinantal degree {val} is not an integer")
    return val.numerator


def _det_factors(p: FormatProfile) -> list[tuple[SparsePolynomial, int]]:
    """``(det(A^(l) B^(l)^T), n_l - k_l)`` for modes with positive exponent,
    ordered by estimated expanded size."""
    bits = _bits_for(p.D)
    out = []
    for mode, e in enumerate(p.codims, start=1):
        if e == 0:
            continue
        det = symbolic_determinant(gram_product(mode, p, bits))
        out.append((det, e))
    out.sort(key=lambda t: len(t[0]) ** t[1])
    return out


def _powered_factors(p: FormatProfile, max_terms: int | None) -> list[SparsePolynomial]:
    return [poly_pow(det, e, max_terms=max_terms) for det, e in _det_factors(p)]


def _product(factors: list[SparsePolynomial], nvars: int, bits: int,
             max_terms: int | None) -> SparsePolynomial:
    result = SparsePolynomial.one(nvars, bits)
    for f in factors:
        result = poly_mul(result, f, max_terms)
    return result


def product_power_det(p: FormatProfile, max_terms: int | None = DEFAULT_MAX_TERMS) -> SparsePolynomial:
    """Fully expanded ``prod_l det(A^(l) B^(l)^T) ** (n_l - k_l)``."""
    return _product(_powered_factors(p, max_terms), p.K + 1, _bits_for(p.D), max_terms)


@lru_cache(maxsize=None)
def _factorial(m: int) -> int:
    return factorial(m)


def diagonal_factorial_sum(poly: SparsePolynomial) -> int:
    """``sum_alpha c_{alpha,alpha} * alpha_0! ... alpha_K!``."""
    total = 0
    for alpha, c in poly.diagonal_items():
        total += c * prod(_factorial(e) for e in alpha)
    return total


def paired_diagonal_sum(q: SparsePolynomial, r: SparsePolynomial) -> int:
    """:func:`diagonal_factorial_sum` of ``q * r`` without expanding the product.

    A product monomial is diagonal iff the x-minus-y exponent differences of
    its two factors cancel, so ``r`` is bucketed by that difference and only
    matching pairs are visited.
    """
    bits = max(q.bits, r.bits, _bits_for(q._degree_bound() + r._degree_bound()))
    q, r = q.repacked(bits), r.repacked(bits)
    nvars = q.nvars
    shift = bits * nvars
    lo = (1 << shift) - 1
    buckets: dict[int, list[tuple[int, int]]] = {}
    for k, c in r.terms.items():
        a = k & lo
        buckets.setdefault(a - (k >> shift), []).append((a, c))
    weights: dict[int, int] = {}
    total = 0
    for k, c in q.terms.items():
        a = k & lo
        partners = buckets.get((k >> shift) - a)
        if not partners:
            continue
        for ar, cr in partners:
            alpha = a + ar
            w = weights.get(alpha)
            if w is None:
                w = prod(_factorial(e) for e in _unpack(alpha, nvars, bits))
                weights[alpha] = w
            total += c * cr * w
    return total


def _g_and_terms(p: FormatProfile, method: str, max_terms: int | None) -> tuple[int, int | None]:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    nvars, bits = p.K + 1, _bits_for(p.D)
    factors = _powered_factors(p, max_terms)
    if method == "paired" and len(factors) >= 1:
        head = _product(factors[:-1], nvars, bits, max_terms)
        return paired_diagonal_sum(head, factors[-1]), None
    full = _product(factors, nvars, bits, max_terms)
    return diagonal_factorial_sum(full), len(full)


def g_value(p: FormatProfile, method: str = "expand", max_terms: int | None = DEFAULT_MAX_TERMS) -> int:
    """``sum_alpha c_{alpha,alpha} alpha_0! ... alpha_K!`` of :func:`product_power_det`."""
    return _g_and_terms(p, method, max_terms)[0]


def f_normalizer(p: FormatProfile) -> int:
    """``prod_i (k_i (n_i - k_i))!``."""
    return prod(factorial(g) for g in p.grassmannian_dims)


def f_value(p: FormatProfile, method: str = "expand", max_terms: int | None = DEFAULT_MAX_TERMS) -> Fraction:
    return Fraction(g_value(p, method, max_terms), f_normalizer(p))


def degree_subspace(p: FormatProfile, force: bool = False, method: str = "expand",
                    max_terms: int | None = DEFAULT_MAX_TERMS) -> DegreeResult:
    """Degree of the subspace variety ``X_k`` in ``P^N``.

    Non-realizable rank profiles raise :class:`RankNotRealizable` unless
    ``force`` is set, in which case the formula is evaluated anyway and the
    result carries ``realizable=False`` (a formal value, no geometric claim).
    """
    realizable = is_realizable(p)
    if not realizable and not force:
        raise RankNotRealizable(
            f"multilinear rank {p.k} is not realizable; no tensor of format {p.n} attains it"
        )
    t0 = time.perf_counter()
    grass = tuple(grassmannian_degree(ki, ni) for ki, ni in zip(p.k, p.n))
    g, nterms = _g_and_terms(p, method, max_terms)
    f = Fraction(g, f_normalizer(p))
    deg = prod(grass) * f
    if deg.denominator == 1:
        deg = deg.numerator
    elif realizable:
        raise IntegralityViolation(f"degree {deg} of X_k for {p} is not an integer")
    return DegreeResult(
        profile=p,
        grass_degrees=grass,
        g_value=g,
        f_value=f,
        degree=deg,
        dimension=p.D + p.K,
        term_count_of_p=nterms,
        elapsed=time.perf_counter() - t0,
        realizable=realizable,
        method=method,
    )


__all__ = [
    "DEFAULT_MAX_TERMS",
    "DegreeResult",
    "IntegralityViolation",
    "ResourceExceeded",
    "degree_subspace",
    "determinantal_degree_oracle",
    "diagonal_factorial_sum",
    "f_normalizer",
    "f_value",
    "g_value",
    "grassmannian_degree",
    "paired_diagonal_sum",
    "product_power_det",
    "segre_degree",
]
