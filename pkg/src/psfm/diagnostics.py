"""Similarity-assumption test and forecast error metrics.

The pattern models rest on one assumption: windows whose x-patterns are
close tend to be followed by windows whose y-patterns are close. The test
here collects the Euclidean distances (dx, dy) for every unordered pair of
training examples, bins each margin into quintiles, and runs a chi-squared
independence test on the resulting 5x5 contingency table. Rejecting
independence is evidence in the assumption's favor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from psfm.pattern_codec import PatternDataset
from psfm.series_store import MonthlyLoadSeries

DOF_5X5 = 16
ALPHA = 0.05
# chi-squared critical value for a 5x5 table at the 5% level: 26.296...
CHI2_CRITICAL_5X5 = float(chi2.ppf(1.0 - ALPHA, DOF_5X5))


@dataclass(frozen=True)
class ContingencyTable:
    """5x5 joint distribution of binned (dx, dy) samples."""

    counts: np.ndarray
    row_edges: np.ndarray
    col_edges: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (5, 5) or np.any(counts < 0):
            raise ValueError("counts must be a 5x5 nonnegative matrix")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    dof: int
    critical_value: float
    reject_null: bool


@dataclass(frozen=True)
class MetricsReport:
    """Forecast accuracy in percent (APE-based) and MWh (RMSE)."""

    median_ape: float
    mape: float
    iqr_ape: float
    rmse: float


def distance_samples(dataset: PatternDataset) -> np.ndarray:
    """(dx, dy) distance pairs for every unordered pair of training examples.

    Returns an array of shape (N*(N-1)/2, 2).
    """
    N = len(dataset)
    if N < 2:
        raise ValueError("distance samples need at least 2 pairs")
    iu = np.triu_indices(N, k=1)
    dx = dataset.pairwise_x_distances[iu]
    Y = dataset.y_matrix
    dy = np.sqrt(((Y[:, None, :] - Y[None, :, :]) ** 2).sum(axis=-1))[iu]
    return np.column_stack([dx, dy])


def _quintile_edges(values: np.ndarray) -> np.ndarray:
    return np.percentile(values, [20, 40, 60, 80])


def quintile_bins(values) -> np.ndarray:
    """Assign each value to one of 5 bins split at the 20/40/60/80 percentiles.

    Values landing exactly on a boundary go to the lower bin, which makes the
    assignment deterministic and left-heavy when counts cannot split evenly.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 5:
        raise ValueError("quintile binning needs at least 5 values")
    if np.all(v == v[0]):
        raise ValueError("degenerate values: no spread to bin")
    return np.searchsorted(_quintile_edges(v), v, side="left")


def contingency_table(samples) -> ContingencyTable:
    """Quintile-bin both margins of (dx, dy) samples into a 5x5 table."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be an (M, 2) array of (dx, dy) pairs")
    rb = quintile_bins(arr[:, 0])
    cb = quintile_bins(arr[:, 1])
    counts = np.bincount(rb * 5 + cb, minlength=25).reshape(5, 5)
    return ContingencyTable(counts, _quintile_edges(arr[:, 0]), _quintile_edges(arr[:, 1]))


def chi_squared_independence(samples) -> ChiSquaredResult:
    """Chi-squared test of independence on the quintile-binned 5x5 table.

    statistic = sum (observed - expected)^2 / expected with expected counts
    from the marginal products; 16 degrees of freedom for a 5x5 table. The
    null (independence of dx and dy) is rejected above the 5% critical value.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be an (M, 2) array of (dx, dy) pairs")
    if arr.shape[0] < 25:
        raise ValueError(f"need at least 25 samples, got {arr.shape[0]}")
    table = contingency_table(arr)
    counts = table.counts.astype(np.float64)
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    if np.any(row == 0) or np.any(col == 0):
        raise ValueError("degenerate marginals: an expected count is 0")
    expected = np.outer(row, col) / counts.sum()
    statistic = float(((counts - expected) ** 2 / expected).sum())
    return ChiSquaredResult(
        statistic=statistic,
        dof=DOF_5X5,
        critical_value=CHI2_CRITICAL_5X5,
        reject_null=statistic > CHI2_CRITICAL_5X5,
    )


def error_metrics(actual, forecast) -> MetricsReport:
    """Median APE, MAPE and APE interquartile range in percent, RMSE in MWh."""
    a = np.asarray(actual, dtype=np.float64)
    f = np.asarray(forecast, dtype=np.float64)
    if a.shape != f.shape or a.ndim != 1 or a.size < 1:
        raise ValueError("actual and forecast must be equal-length nonempty vectors")
    if np.any(a <= 0):
        raise ValueError("actual demands must be positive to score APE")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(f))):
        raise ValueError("metrics need finite inputs")
    ape = 100.0 * np.abs(a - f) / a
    return MetricsReport(
        median_ape=float(np.median(ape)),
        mape=float(ape.mean()),
        iqr_ape=float(np.percentile(ape, 75) - np.percentile(ape, 25)),
        rmse=float(np.sqrt(((a - f) ** 2).mean())),
    )


def seasonal_naive(series: MonthlyLoadSeries, m: int) -> np.ndarray:
    """Repeat the last observed year: forecast month t = same month one year back.

    Returns the m demands following the series end; horizons beyond 12
    months tile the last year again.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    L = len(series)
    if L < 12:
        raise ValueError(f"{series.country_code}: seasonal naive needs at least 12 months, have {L}")
    last_year = series.demand[L - 12 :]
    return last_year[np.arange(m) % 12]
