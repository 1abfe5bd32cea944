"""Similarity-weighted regressors over pattern datasets.

Each model turns the distances between a query x-pattern and the training
x-patterns into nonnegative weights that sum to one, then forecasts the
y-pattern as the weighted average of the training y-patterns. The variants
differ only in the weighting law:

* ``knn``          - uniform 1/k over the k nearest neighbors
* ``knn_weighted`` - k nearest neighbors, weights shrinking linearly (or with
  tunable convexity) from the closest to the k-th
* ``fnm``          - every training pattern weighted by the membership
  exp(-(d/sigma)^alpha)
* ``nwe``          - product normal kernel with per-dimension bandwidths,
  exp(-sum_t (q_t - x_t)^2 / (2 h_t^2))
* ``grnn``         - one Gaussian unit per training pattern,
  exp(-d^2 / sigma_i^2)

With a shared bandwidth the last three coincide: grnn(sigma) == fnm(sigma,
alpha=2) == nwe(h_t = sigma/sqrt(2) for all t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from psfm.pattern_codec import (
    CodingVariables,
    EncodingSpec,
    PatternDataset,
    build_pairs,
    decode_y,
    encode_x,
)
from psfm.series_store import MonthlyLoadSeries

MODEL_KINDS = ("knn", "knn_weighted", "fnm", "nwe", "grnn")

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ModelConfig:
    """One model variant with its hyperparameters.

    Only the fields relevant to ``kind`` are consulted: k/rho/gamma for the
    k-NN variants, sigma/alpha for fnm, bandwidths for nwe, sigma or
    per_neuron_sigmas for grnn.
    """

    kind: str
    k: int | None = None
    rho: float = 1.0
    gamma: float = 0.0
    sigma: float | None = None
    alpha: float = 2.0
    bandwidths: tuple[float, ...] | None = None
    per_neuron_sigmas: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(((a - b) ** 2).sum()))


def _query_distances(query: np.ndarray, dataset: PatternDataset) -> np.ndarray:
    X = dataset.x_matrix
    if query.shape != (X.shape[1],):
        raise ValueError(f"query length {query.shape} does not match pattern length {X.shape[1]}")
    return np.sqrt(((X - query) ** 2).sum(axis=1))


def _as_query(query) -> np.ndarray:
    q = np.asarray(query, dtype=np.float64)
    if not np.all(np.isfinite(q)):
        raise ValueError("query pattern contains non-finite values")
    return q


def _nearest_index(distances: np.ndarray, anchors: np.ndarray) -> int:
    """Index of the smallest distance; ties go to the lower anchor."""
    return int(np.lexsort((anchors, distances))[0])


def neighbor_weights(distances_k: np.ndarray, rho: float, gamma: float) -> np.ndarray:
    """Weights over an already-selected neighborhood, nearest first.

    The raw weight of neighbor i at distance d_i, with d_k the distance of
    the farthest selected neighbor, is

        v_i = rho * ((1 - d_i/d_k) / (1 + gamma * d_i/d_k) - 1) + 1

    which spans [1 - rho, 1]: rho = 0 gives uniform weights, rho = 1 the most
    diverse; gamma bends the profile (0 linear, > 0 convex, < 0 concave).
    When d_k = 0 all selected neighbors tie and the ratios are defined as 0;
    when every v_i is 0 (all neighbors exactly at d_k with rho = 1) the
    weights fall back to uniform.
    """
    d = np.asarray(distances_k, dtype=np.float64)
    dk = d[-1]
    r = d / dk if dk > 0 else np.zeros_like(d)
    den = 1.0 + gamma * r
    safe = den != 0.0
    ratio = np.where(safe, (1.0 - r) / np.where(safe, den, 1.0), 1.0)
    v = rho * (ratio - 1.0) + 1.0
    s = v.sum()
    if s <= 0.0:
        return np.full(d.size, 1.0 / d.size)
    return v / s


def knn_weights(query, dataset: PatternDataset, k: int, rho: float = 0.0, gamma: float = 0.0) -> np.ndarray:
    """k-nearest-neighbor weights over the whole dataset (zeros off-neighborhood).

    rho = 0 reproduces the plain uniform 1/k variant exactly. Ties at the
    k-th distance are broken toward the lower anchor_index; the neighborhood
    never grows beyond k.
    """
    q = _as_query(query)
    N = len(dataset)
    if not isinstance(k, (int, np.integer)) or k < 1 or k > N:
        raise ValueError(f"k must be in 1..{N}, got {k!r}")
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho!r}")
    if gamma < -1.0:
        raise ValueError(f"gamma must be >= -1, got {gamma!r}")
    d = _query_distances(q, dataset)
    neigh = np.lexsort((dataset.anchors, d))[:k]
    w = np.zeros(N)
    w[neigh] = neighbor_weights(d[neigh], rho, gamma)
    return w


def _normalize_or_nearest(raw: np.ndarray, distances: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    s = raw.sum()
    if s <= 0.0:
        # every kernel value underflowed to zero: degrade to nearest neighbor
        w = np.zeros_like(raw)
        w[_nearest_index(distances, anchors)] = 1.0
        return w
    return raw / s


def fnm_weights(query, dataset: PatternDataset, sigma: float, alpha: float = 2.0) -> np.ndarray:
    """Fuzzy-neighborhood weights: exp(-(d/sigma)^alpha) over all training patterns."""
    q = _as_query(query)
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    d = _query_distances(q, dataset)
    mu = np.exp(-((d / sigma) ** alpha))
    return _normalize_or_nearest(mu, d, dataset.anchors)


def nwe_weights(query, dataset: PatternDataset, bandwidths) -> np.ndarray:
    """Nadaraya-Watson weights with a per-dimension product normal kernel."""
    q = _as_query(query)
    h = np.asarray(bandwidths, dtype=np.float64)
    n = dataset.x_matrix.shape[1]
    if h.shape != (n,):
        raise ValueError(f"bandwidth vector length {h.shape} does not match pattern length {n}")
    if not np.all(h > 0):
        raise ValueError("all bandwidths must be > 0")
    z = (dataset.x_matrix - q) / h
    kern = np.exp(-0.5 * (z**2).sum(axis=1))
    d = _query_distances(q, dataset)
    return _normalize_or_nearest(kern, d, dataset.anchors)


def grnn_weights(query, dataset: PatternDataset, sigmas) -> np.ndarray:
    """GRNN weights: normalized Gaussian units exp(-d_i^2 / sigma_i^2).

    sigmas may be a scalar (shared bandwidth) or a length-N vector with one
    bandwidth per training pattern.
    """
    q = _as_query(query)
    N = len(dataset)
    sig = np.asarray(sigmas, dtype=np.float64)
    if sig.ndim == 0:
        sig = np.full(N, float(sig))
    if sig.shape != (N,):
        raise ValueError(f"sigma vector length {sig.shape} does not match dataset size {N}")
    if not np.all(sig > 0):
        raise ValueError("all sigmas must be > 0")
    d = _query_distances(q, dataset)
    g = np.exp(-(d**2) / sig**2)
    return _normalize_or_nearest(g, d, dataset.anchors)


def model_weights(query, dataset: PatternDataset, config: ModelConfig) -> np.ndarray:
    """Dispatch to the weighting law selected by config.kind."""
    if config.kind == "knn":
        return knn_weights(query, dataset, config.k, rho=0.0, gamma=0.0)
    if config.kind == "knn_weighted":
        return knn_weights(query, dataset, config.k, rho=config.rho, gamma=config.gamma)
    if config.kind == "fnm":
        return fnm_weights(query, dataset, config.sigma, config.alpha)
    if config.kind == "nwe":
        return nwe_weights(query, dataset, config.bandwidths)
    sig = config.per_neuron_sigmas if config.per_neuron_sigmas is not None else config.sigma
    return grnn_weights(query, dataset, sig)


def aggregate(weights, dataset: PatternDataset) -> np.ndarray:
    """Convex combination of the training y-patterns under the given weights."""
    w = np.asarray(weights, dtype=np.float64)
    N = len(dataset)
    if w.shape != (N,):
        raise ValueError(f"weight vector length {w.shape} does not match dataset size {N}")
    if w.min() < 0:
        raise ValueError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {w.sum()!r}")
    return w @ dataset.y_matrix


def forecast(
    series: MonthlyLoadSeries,
    config: ModelConfig,
    spec: EncodingSpec | None = None,
    coding_override: CodingVariables | None = None,
) -> np.ndarray:
    """Forecast the m demands starting tau months after the series end.

    Pipeline: encode the query window (the last n months), weight the
    training pairs, aggregate their y-patterns, decode. In history mode the
    forecast is decoded with the query window's own coding variables; in
    external mode the caller supplies the target-window coding via
    coding_override. An explicit override always wins.
    """
    spec = spec if spec is not None else EncodingSpec()
    dataset = build_pairs(series, spec)
    query_pattern, query_coding = encode_x(series.demand[-spec.n :], spec)
    w = model_weights(query_pattern, dataset, config)
    y_hat = aggregate(w, dataset)
    if coding_override is not None:
        coding = coding_override
    elif spec.coding_mode == "history":
        coding = query_coding
    else:
        raise ValueError("coding_mode 'external' requires a coding_override")
    return decode_y(y_hat, coding, spec)
