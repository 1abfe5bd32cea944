"""Seeded synthetic demand series for tests, demos, and desk-scale benchmarks."""

from __future__ import annotations

import numpy as np

from psfm.series_store import MonthlyLoadSeries, SeriesCollection


def annual_shape(amplitude: float = 0.2, skew: float = 0.05) -> np.ndarray:
    """A smooth 12-month multiplicative profile with a winter peak."""
    t = np.arange(12)
    shape = 1.0 + amplitude * np.cos(2 * np.pi * t / 12) + skew * np.sin(4 * np.pi * t / 12)
    return shape / shape.mean()


def synthetic_series(
    country_code: str = "SYN",
    start_year: int = 1995,
    years: int = 20,
    base: float = 100_000.0,
    trend_per_year: float = 2_000.0,
    shape: np.ndarray | None = None,
    noise: float = 0.02,
    rng: np.random.Generator | int | None = None,
) -> MonthlyLoadSeries:
    """Linear trend times a fixed annual shape times (1 + noise).

    demand[t] = (base + trend_per_year * t/12) * shape[month] * (1 + noise * eps_t)
    with eps_t standard normal. Deterministic for a fixed rng seed.
    """
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    shape = annual_shape() if shape is None else np.asarray(shape, dtype=np.float64)
    if shape.shape != (12,):
        raise ValueError("shape must have 12 monthly factors")
    t = np.arange(years * 12)
    level = base + trend_per_year * (t / 12.0)
    demand = level * np.tile(shape, years) * (1.0 + noise * rng.standard_normal(t.size))
    if np.any(demand <= 0):
        raise ValueError("parameters produced non-positive demand; reduce noise or trend")
    return MonthlyLoadSeries(
        country_code,
        years=start_year + t // 12,
        months=t % 12 + 1,
        demand=demand,
    )


def synthetic_corpus(
    count: int = 10,
    years: int = 20,
    start_year: int = 1995,
    noise: float = 0.02,
    seed: int = 0,
) -> SeriesCollection:
    """A corpus of seeded series with varied levels, trends, and annual shapes."""
    rng = np.random.default_rng(seed)
    series = []
    for i in range(count):
        base = rng.uniform(50_000.0, 400_000.0)
        trend = rng.uniform(-0.01, 0.03) * base
        shape = annual_shape(
            amplitude=rng.uniform(0.1, 0.3), skew=rng.uniform(-0.08, 0.08)
        )
        series.append(
            synthetic_series(
                country_code=f"S{i + 1:02d}",
                start_year=start_year,
                years=years,
                base=base,
                trend_per_year=trend,
                shape=shape,
                noise=noise,
                rng=rng,
            )
        )
    return SeriesCollection(tuple(series))
