"""Hyperparameter selection by leave-one-out grid search.

For each candidate input-window length n, the dataset is rebuilt and the
model's own hyperparameter is swept: k for the nearest-neighbor variants,
the bandwidth multipliers a (sigma = a * median pairwise distance) for fnm
and grnn, and b (h_t = b * Scott-rule bandwidth) for nwe. Every grid point
is scored by leave-one-out cross-validation: each pair in turn is held out,
predicted from the rest, and both the prediction and the held-out y-pattern
are decoded with that pair's coding variables before the absolute percentage
error is accumulated.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from psfm.models import ModelConfig, MODEL_KINDS
from psfm.pattern_codec import EncodingSpec, PatternDataset, build_pairs
from psfm.series_store import MonthlyLoadSeries


def _default_a_values() -> tuple[float, ...]:
    return tuple(np.round(0.02 * np.arange(1, 51), 10))


def _default_b_values() -> tuple[float, ...]:
    return tuple(np.round(0.15 + 0.05 * np.arange(0, 38), 10))


@dataclass(frozen=True)
class GridSpec:
    """Candidate values for the grid search."""

    n_values: tuple[int, ...] = tuple(range(3, 25))
    k_values: tuple[int, ...] = tuple(range(1, 51))
    a_values: tuple[float, ...] = field(default_factory=_default_a_values)
    b_values: tuple[float, ...] = field(default_factory=_default_b_values)

    def __post_init__(self) -> None:
        for name in ("n_values", "k_values", "a_values", "b_values"):
            vals = tuple(getattr(self, name))
            object.__setattr__(self, name, vals)
            if not vals:
                raise ValueError(f"{name} must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n_values must be positive")
        if any(k < 1 for k in self.k_values):
            raise ValueError("k_values must be positive")
        if any(a <= 0 for a in self.a_values):
            raise ValueError("a_values must be > 0")
        if any(b <= 0 for b in self.b_values):
            raise ValueError("b_values must be > 0")


class GridPoint(NamedTuple):
    n: int
    value: float
    config: ModelConfig
    error: float
    spec: EncodingSpec


@dataclass(frozen=True)
class TuneResult:
    """Winning configuration plus the full evaluated grid for reporting."""

    best_config: ModelConfig
    best_spec: EncodingSpec
    cv_error: float
    grid_trace: tuple[GridPoint, ...]


def median_pairwise_distance(dataset: PatternDataset) -> float:
    """Median over all unordered pair distances between x-patterns."""
    N = len(dataset)
    if N < 2:
        raise ValueError("median pairwise distance needs at least 2 pairs")
    iu = np.triu_indices(N, k=1)
    return float(np.median(dataset.pairwise_x_distances[iu]))


def scott_bandwidths(dataset: PatternDataset) -> np.ndarray:
    """Scott-rule starting bandwidths: s_t * N^(-1/(n+4)) per dimension.

    s_t is the population standard deviation (divide by N) of pattern
    component t over the training set. Components that are constant across
    the whole set come back as 0; scaling them is rejected downstream.
    """
    N = len(dataset)
    if N < 2:
        raise ValueError("Scott bandwidths need at least 2 pairs")
    n = dataset.x_matrix.shape[1]
    s = dataset.x_matrix.std(axis=0)
    return s * N ** (-1.0 / (n + 4))


def sigma_from_a(a: float, dataset: PatternDataset) -> float:
    """Bandwidth candidate sigma = a * median pairwise distance."""
    if not a > 0:
        raise ValueError(f"a must be > 0, got {a!r}")
    d_med = median_pairwise_distance(dataset)
    if d_med == 0.0:
        raise ValueError("degenerate dataset: median pairwise distance is 0")
    return a * d_med


def bandwidths_from_b(b: float, dataset: PatternDataset) -> np.ndarray:
    """Bandwidth candidates h_t = b * Scott bandwidth, componentwise."""
    if not b > 0:
        raise ValueError(f"b must be > 0, got {b!r}")
    h_s = scott_bandwidths(dataset)
    flat = np.flatnonzero(h_s == 0.0)
    if flat.size:
        raise ValueError(f"flat pattern component {int(flat[0])}: Scott bandwidth is 0")
    return b * h_s


def _holdout_predictions(dataset: PatternDataset, config: ModelConfig) -> np.ndarray:
    """Row j is the y-pattern predicted with pair j left out.

    Identical, fold by fold, to running the model's weight function and
    aggregation on the dataset minus pair j; the matrix form just evaluates
    all folds at once.
    """
    D = dataset.pairwise_x_distances
    N = len(dataset)
    Y = dataset.y_matrix

    if config.kind in ("knn", "knn_weighted"):
        rho = 0.0 if config.kind == "knn" else config.rho
        gamma = config.gamma
        k_eff = min(int(config.k), N - 1)  # a fold has only N-1 candidates
        idx = dataset.neighbor_order[:, :k_eff]
        d = np.take_along_axis(D, idx, axis=1)
        dk = d[:, -1:]
        r = np.where(dk > 0, d / np.where(dk > 0, dk, 1.0), 0.0)
        den = 1.0 + gamma * r
        safe = den != 0.0
        ratio = np.where(safe, (1.0 - r) / np.where(safe, den, 1.0), 1.0)
        v = rho * (ratio - 1.0) + 1.0
        s = v.sum(axis=1, keepdims=True)
        w = np.where(s > 0, v / np.where(s > 0, s, 1.0), 1.0 / k_eff)
        return np.einsum("jk,jkm->jm", w, Y[idx])

    if config.kind == "fnm":
        M = np.exp(-((D / config.sigma) ** config.alpha))
    elif config.kind == "grnn":
        sig = (
            np.asarray(config.per_neuron_sigmas, dtype=np.float64)
            if config.per_neuron_sigmas is not None
            else np.full(N, float(config.sigma))
        )
        if sig.shape != (N,):
            raise ValueError(f"sigma vector length {sig.shape} does not match dataset size {N}")
        M = np.exp(-(D**2) / sig**2)
    elif config.kind == "nwe":
        h = np.asarray(config.bandwidths, dtype=np.float64)
        X = dataset.x_matrix
        if h.shape != (X.shape[1],):
            raise ValueError(f"bandwidth vector length {h.shape} does not match pattern length")
        z = dataset.pairwise_x_diffs / h
        M = np.exp(-0.5 * (z**2).sum(axis=-1))
    else:
        raise ValueError(f"unknown model kind {config.kind!r}")

    np.fill_diagonal(M, 0.0)
    s = M.sum(axis=1)
    dead = s <= 0.0
    if np.any(dead):
        nearest = dataset.neighbor_order[:, 0]
        M[dead] = 0.0
        M[np.flatnonzero(dead), nearest[dead]] = 1.0
        s = M.sum(axis=1)
    return (M / s[:, None]) @ Y


def _decode_matrix(patterns: np.ndarray, dataset: PatternDataset) -> np.ndarray:
    """Decode one y-pattern per row with that pair's own coding variables."""
    ydef = dataset.spec.y_definition
    mean = dataset.y_means[:, None]
    disp = dataset.y_dispersions[:, None]
    if ydef == "raw":
        return patterns.copy()
    if ydef == "centered":
        return patterns + mean
    if ydef == "ratio":
        return patterns * mean
    return patterns * disp + mean


def loocv_error(dataset: PatternDataset, config: ModelConfig, spec: EncodingSpec | None = None) -> float:
    """Mean absolute percentage error over all leave-one-out folds.

    For every pair j the model predicts the y-pattern from the dataset with
    pair j removed; the prediction and the true y-pattern are both decoded
    with pair j's coding variables, and the APE over the m months is pooled
    across folds. For the k-NN kinds, k is capped at the fold size N-1 so
    that k = N means "average everything else".
    """
    if spec is not None and spec != dataset.spec:
        raise ValueError("spec does not match the dataset's encoding spec")
    N = len(dataset)
    if N < 2:
        raise ValueError("leave-one-out needs at least 2 pairs")
    if config.kind in ("knn", "knn_weighted"):
        if not isinstance(config.k, (int, np.integer)) or config.k < 1 or config.k > N:
            raise ValueError(f"k must be in 1..{N}, got {config.k!r}")
    predicted = _holdout_predictions(dataset, config)
    forecast_mwh = _decode_matrix(predicted, dataset)
    actual_mwh = _decode_matrix(dataset.y_matrix, dataset)
    if np.any(actual_mwh <= 0):
        raise ValueError("decoded actual demands must be positive to score APE")
    ape = 100.0 * np.abs(actual_mwh - forecast_mwh) / actual_mwh
    return float(ape.mean())


def _configs_for_n(dataset: PatternDataset, kind: str, grid: GridSpec):
    """(value, config) candidates feasible on this dataset, value-ascending."""
    N = len(dataset)
    out = []
    if kind in ("knn", "knn_weighted"):
        rho = 0.0 if kind == "knn" else 1.0
        for k in sorted(set(int(v) for v in grid.k_values)):
            if k <= N:
                out.append((float(k), ModelConfig(kind=kind, k=k, rho=rho, gamma=0.0)))
    elif kind in ("fnm", "grnn"):
        d_med = median_pairwise_distance(dataset)
        if d_med > 0.0:
            for a in sorted(set(float(v) for v in grid.a_values)):
                out.append((a, ModelConfig(kind=kind, sigma=a * d_med, alpha=2.0)))
    elif kind == "nwe":
        h_s = scott_bandwidths(dataset)
        if np.all(h_s > 0):
            for b in sorted(set(float(v) for v in grid.b_values)):
                out.append((b, ModelConfig(kind=kind, bandwidths=tuple(b * h_s))))
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return out


def grid_search(
    series: MonthlyLoadSeries,
    spec_template: EncodingSpec,
    kind: str,
    grid: GridSpec | None = None,
    jobs: int = 1,
) -> TuneResult:
    """Exhaustively evaluate the kind-relevant grid and return the LOOCV argmin.

    The k-NN variants sweep n x k (the weighted variant with rho = 1 and
    gamma = 0 fixed), fnm and grnn sweep n x a with alpha = 2, nwe sweeps
    n x b. Grid points the series cannot support (window too long, k larger
    than the dataset, flat bandwidths) are skipped; an error is raised only
    when nothing at all is feasible. Ties are broken toward smaller n, then
    toward the smaller k/a/b value.
    """
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    grid = grid if grid is not None else GridSpec()
    trace: list[GridPoint] = []
    best_i = -1
    for n in sorted(set(int(v) for v in grid.n_values)):
        spec_n = spec_template.with_n(n)
        try:
            dataset = build_pairs(series, spec_n)
        except ValueError:
            continue
        if len(dataset) < 2:
            continue
        candidates = _configs_for_n(dataset, kind, grid)
        if not candidates:
            continue
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                errors = list(pool.map(lambda c: loocv_error(dataset, c[1]), candidates))
        else:
            errors = [loocv_error(dataset, cfg) for _, cfg in candidates]
        for (value, cfg), err in zip(candidates, errors):
            trace.append(GridPoint(n, value, cfg, err, spec_n))
            # trace is (n, value)-ordered: strict < implements the tie rule
            if best_i < 0 or err < trace[best_i].error:
                best_i = len(trace) - 1
    if best_i < 0:
        raise ValueError(f"{series.country_code}: every {kind} grid point is infeasible")
    best = trace[best_i]
    return TuneResult(best.config, best.spec, best.error, tuple(trace))
