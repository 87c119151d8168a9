"""Seeded generators for test matrices and spectral data."""

from __future__ import annotations

import numpy as np

from .spectral_classifier import FactorType, GeometricTail, SpectralData


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_with_singular_values(s, rng: np.random.Generator) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    n = s.size
    return (random_unitary(n, rng) * s) @ random_unitary(n, rng)


def random_invertible(n: int, kappa: float, rng: np.random.Generator) -> np.ndarray:
    """Unit operator norm, condition number exactly ``kappa`` (for n >= 2)."""
    if n == 1:
        return random_unitary(1, rng)
    inner = np.exp(rng.uniform(-np.log(kappa), 0.0, size=n - 2))
    s = np.concatenate([[1.0], inner, [1.0 / kappa]])
    return random_with_singular_values(s, rng)


def random_kappa(rng: np.random.Generator, max_kappa: float = 1e3) -> float:
    return float(np.exp(rng.uniform(0.0, np.log(max_kappa))))


def random_rank_deficient(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    s = np.zeros(n)
    s[:rank] = np.exp(rng.uniform(-3.0, 0.0, size=rank))
    return random_with_singular_values(s, rng)


def random_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _distinct_mus(count: int, rng: np.random.Generator, spread: float) -> list[float]:
    while True:
        mus = np.exp(rng.uniform(-np.log(spread), 0.0, size=count))
        mus = np.sort(mus)[::-1]
        if count < 2 or np.min(mus[:-1] / mus[1:]) > 1.01:
            return [float(m) for m in mus]


def random_finite_spectral(
    rng: np.random.Generator,
    factor_type=FactorType.TYPE_I_FINITE,
    max_terms: int = 4,
    max_dim: int = 8,
    spread: float = 100.0,
) -> SpectralData:
    ft = FactorType(factor_type)
    while True:
        count = int(rng.integers(1, max_terms + 1))
        if ft.is_type_i:
            mults = [float(m) for m in rng.integers(1, 4, size=count)]
            if sum(mults) > max_dim:
                continue
        else:
            mults = [float(m) for m in rng.uniform(0.1, 3.0, size=count)]
        mus = _distinct_mus(count, rng, spread)
        return SpectralData.build(ft, list(zip(mus, mults)))


def random_infinite_spectral(
    rng: np.random.Generator, factor_type=None, max_head: int = 4
) -> SpectralData:
    """Random head followed by a geometric tail, type I_inf or II_inf."""
    if factor_type is None:
        factor_type = [FactorType.TYPE_I_INF, FactorType.TYPE_II_INF][int(rng.integers(2))]
    ft = FactorType(factor_type)
    count = int(rng.integers(0, max_head + 1))
    mus = _distinct_mus(count, rng, 50.0) if count else []
    if ft.is_type_i:
        mults = [float(m) for m in rng.integers(1, 5, size=count)]
        tail_mult = float(rng.integers(1, 5))
    else:
        mults = [float(m) for m in rng.uniform(0.05, 4.0, size=count)]
        tail_mult = float(rng.uniform(0.05, 4.0))
    start = (mus[-1] if mus else 1.0) * float(rng.uniform(0.1, 0.9))
    tail = GeometricTail(ratio=float(rng.uniform(0.05, 0.95)), mult=tail_mult, start=start)
    return SpectralData.build(ft, list(zip(mus, mults)), tail)
