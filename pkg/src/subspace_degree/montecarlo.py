"""Monte Carlo cross-check of the exact degree through Gaussian expectations.

For a standard complex Gaussian core tensor ``T``

    2**D * prod_i (k_i (n_i - k_i))! * f(k, n) = E prod_l det(T^(l) T^(l)*) ** (n_l - k_l)

so averaging the right-hand integrand gives an unbiased estimate of ``f`` and
hence of the degree, independent of any symbolic expansion.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial, prod, sqrt

import numpy as np

from .core import FormatProfile
from .degree import f_normalizer, grassmannian_degree
from .polyring import SparsePolynomial

DEFAULT_SAMPLES = 1_000_000
CHUNK = 1 << 16
SPREAD_LIMIT = 1e8


@dataclass(frozen=True)
class McEstimate:
    profile: FormatProfile
    samples: int
    mean: float
    std_error: float
    derived_f: float
    derived_degree: float
    degree_std_error: float
    seed: int
    exact_degree: int | None = None
    z_score: float | None = None

    def with_exact(self, exact: int) -> "McEstimate":
        return replace(self, exact_degree=exact,
                       z_score=_z(self.derived_degree, exact, self.degree_std_error))

    def passes(self, sigmas: float = 4.0) -> bool:
        return self.z_score is not None and abs(self.z_score) <= sigmas

    def to_record(self) -> dict:
        p = self.profile
        return {
            "k": list(p.k),
            "n": list(p.n),
            "samples": self.samples,
            "seed": self.seed,
            "mean": self.mean,
            "std_error": self.std_error,
            "derived_f": self.derived_f,
            "derived_degree": self.derived_degree,
            "degree_std_error": self.degree_std_error,
            "exact_degree": None if self.exact_degree is None else str(self.exact_degree),
            "z_score": self.z_score,
        }


def _z(estimate: float, exact, se: float) -> float:
    diff = estimate - float(exact)
    if se == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / se


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # the substream depends only on the chunk index, never on the lane count
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_gaussian_batch(nvars: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` draws of ``nvars`` i.i.d. standard complex normals."""
    re = rng.standard_normal((size, nvars))
    im = rng.standard_normal((size, nvars))
    return re + 1j * im


def sample_gaussian_tensor(p: FormatProfile, rng: np.random.Generator) -> np.ndarray:
    """One flattened ``k_1 x ... x k_d`` tensor with N_C(0, 1) entries."""
    return sample_gaussian_batch(p.K + 1, rng, 1)[0]


def _gram_dets(M: np.ndarray) -> np.ndarray:
    G = M @ np.conj(np.swapaxes(M, -1, -2))
    try:
        L = np.linalg.cholesky(G)
        diag = np.abs(np.diagonal(L, axis1=-2, axis2=-1)) ** 2
        return np.prod(diag, axis=-1)
    except np.linalg.LinAlgError:
        det = np.linalg.det(G)
        scale = np.prod(np.real(np.diagonal(G, axis1=-2, axis2=-1)), axis=-1)
        if np.any(det.real < -1e-9 * np.maximum(scale, 1.0)):
            raise FloatingPointError("Gram determinant is negative; flattening is inconsistent")
        return np.clip(det.real, 0.0, None)


def log_weight(p: FormatProfile, T: np.ndarray) -> np.ndarray:
    """``log prod_l det(T^(l) T^(l)*) ** (n_l - k_l)`` for a batch ``T`` of shape ``(S, K+1)``."""
    T = np.asarray(T)
    if T.shape[-1] != p.K + 1:
        raise ValueError(f"expected tensors with {p.K + 1} entries, got shape {T.shape}")
    T = T.reshape((-1,) + p.k)
    out = np.zeros(T.shape[0])
    with np.errstate(divide="ignore"):
        for mode, e in enumerate(p.codims):
            if e == 0:
                continue
            M = np.moveaxis(T, mode + 1, 1).reshape(T.shape[0], p.k[mode], -1)
            out += e * np.log(_gram_dets(M))
    return out


def weight(p: FormatProfile, T: np.ndarray) -> np.ndarray | float:
    """Integrand ``prod_l det(T^(l) T^(l)*) ** (n_l - k_l)``.

    Accepts a single tensor of shape ``(K+1,)`` or a batch ``(S, K+1)``.
    """
    T = np.asarray(T)
    w = np.exp(log_weight(p, T))
    return float(w[0]) if T.ndim == 1 else w


def _moments(w: np.ndarray, logw: np.ndarray) -> tuple[int, float, float]:
    finite = logw[np.isfinite(logw)]
    wide = finite.size and (finite.max() - finite.min()) > np.log(SPREAD_LIMIT)
    x = w.astype(np.longdouble) if wide else w
    mean = x.mean()
    m2 = ((x - mean) ** 2).sum()
    return w.size, float(mean), float(m2)


def _merge(stats: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run_chunks(fn, samples: int, lanes: int) -> tuple[int, float, float]:
    sizes = [min(CHUNK, samples - i) for i in range(0, samples, CHUNK)]
    jobs = list(enumerate(sizes))
    if lanes > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=lanes) as pool:
            stats = list(pool.map(lambda j: fn(*j), jobs))
    else:
        stats = [fn(i, s) for i, s in jobs]
    return _merge(stats)


def estimate_f(p: FormatProfile, samples: int = DEFAULT_SAMPLES, seed: int = 0,
               lanes: int = 1, exact_degree: int | None = None) -> McEstimate:
    """Estimate ``f(k, n)`` and the degree from ``samples`` Gaussian draws.

    Results are bit-identical for a given ``(p, samples, seed)`` whatever the
    number of ``lanes``.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    nvars = p.K + 1

    def chunk(i: int, size: int):
        T = sample_gaussian_batch(nvars, _chunk_rng(seed, i), size)
        lw = log_weight(p, T)
        return _moments(np.exp(lw), lw)

    n, mean, m2 = _run_chunks(chunk, samples, lanes)
    se = sqrt(m2 / (n - 1)) / sqrt(n)
    norm = 2 ** p.D * f_normalizer(p)
    to_degree = float(Fraction(prod(grassmannian_degree(ki, ni) for ki, ni in zip(p.k, p.n)), norm))
    est = McEstimate(
        profile=p,
        samples=n,
        mean=mean,
        std_error=se,
        derived_f=mean / norm,
        derived_degree=mean * to_degree,
        degree_std_error=se * to_degree,
        seed=seed,
    )
    return est if exact_degree is None else est.with_exact(exact_degree)


def chi_squared_moment(n: int, k: int) -> int:
    """``E rho**k`` for ``rho ~ chi^2_{2n}``, i.e. ``rho = |Z|^2`` with ``Z ~ N_C(0, 1)^n``."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return 2 ** k * factorial(k + n - 1) // factorial(n - 1)


def empirical_chi_squared_moment(n: int, k: int, samples: int, seed: int = 0) -> tuple[float, float]:
    """Sample mean and standard error of ``|Z|^(2k)`` for ``Z ~ N_C(0, 1)^n``."""
    rng = np.random.default_rng(seed)
    Z = sample_gaussian_batch(n, rng, samples)
    rho = np.sum(np.abs(Z) ** 2, axis=1) ** k
    return float(rho.mean()), float(rho.std(ddof=1) / sqrt(samples))


def gaussian_expectation(poly: SparsePolynomial) -> int:
    """Exact ``E poly(Z, conj(Z))``: ``sum_alpha c_{alpha,alpha} 2^|alpha| alpha!``."""
    total = 0
    for alpha, c in poly.diagonal_items():
        total += c * 2 ** sum(alpha) * prod(factorial(e) for e in alpha)
    return total


def gaussian_moment_check(poly: SparsePolynomial, samples: int = 100_000,
                          seed: int = 0) -> tuple[float, Fraction, float]:
    """Compare the Monte Carlo mean of ``poly(Z, conj(Z))`` with its exact value.

    Returns ``(empirical, exact, z_score)``; the z-score uses the real part.
    """
    exact = Fraction(gaussian_expectation(poly))

    def chunk(i: int, size: int):
        Z = sample_gaussian_batch(poly.nvars, _chunk_rng(seed, i), size)
        v = np.real(poly.evaluate(Z, np.conj(Z)))
        mean = v.mean()
        return v.size, float(mean), float(((v - mean) ** 2).sum())

    n, mean, m2 = _run_chunks(chunk, samples, 1)
    se = sqrt(m2 / (n - 1)) / sqrt(n)
    return mean, exact, _z(mean, exact, se)
