"""Pattern similarity-based forecasting for monthly seasonal demand series.

The pipeline: encode windows of a monthly series as shape patterns, weight
historical patterns by their similarity to the query, aggregate the paired
future patterns, and decode the result back to MWh. Includes grid-search
tuning with leave-one-out validation, a chi-squared test of the similarity
assumption, error metrics, and a benchmark CLI.
"""

from psfm.bench import EvaluationReport, RunConfig, naive_coding_forecast, yearly_codings
from psfm.diagnostics import (
    ALPHA,
    CHI2_CRITICAL_5X5,
    ChiSquaredResult,
    ContingencyTable,
    MetricsReport,
    chi_squared_independence,
    contingency_table,
    distance_samples,
    error_metrics,
    quintile_bins,
    seasonal_naive,
)
from psfm.models import (
    MODEL_KINDS,
    ModelConfig,
    aggregate,
    euclidean_distance,
    fnm_weights,
    forecast,
    grnn_weights,
    knn_weights,
    model_weights,
    nwe_weights,
)
from psfm.pattern_codec import (
    CodingVariables,
    EncodingSpec,
    PatternDataset,
    PatternPair,
    build_pairs,
    decode_y,
    encode_x,
    encode_y,
    is_degenerate,
    load_coding_csv,
    window_coding,
)
from psfm.series_store import (
    MonthlyLoadSeries,
    SeriesCollection,
    load_csv,
    split_train_test,
    validate_csv,
    write_csv,
)
from psfm.synthetic import annual_shape, synthetic_corpus, synthetic_series
from psfm.tuner import (
    GridPoint,
    GridSpec,
    TuneResult,
    bandwidths_from_b,
    grid_search,
    loocv_error,
    median_pairwise_distance,
    scott_bandwidths,
    sigma_from_a,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "CHI2_CRITICAL_5X5",
    "ChiSquaredResult",
    "CodingVariables",
    "ContingencyTable",
    "EncodingSpec",
    "EvaluationReport",
    "GridPoint",
    "GridSpec",
    "MODEL_KINDS",
    "MetricsReport",
    "ModelConfig",
    "MonthlyLoadSeries",
    "PatternDataset",
    "PatternPair",
    "RunConfig",
    "SeriesCollection",
    "TuneResult",
    "aggregate",
    "annual_shape",
    "bandwidths_from_b",
    "build_pairs",
    "chi_squared_independence",
    "contingency_table",
    "decode_y",
    "distance_samples",
    "encode_x",
    "encode_y",
    "error_metrics",
    "euclidean_distance",
    "fnm_weights",
    "forecast",
    "grid_search",
    "grnn_weights",
    "is_degenerate",
    "knn_weights",
    "load_coding_csv",
    "load_csv",
    "loocv_error",
    "median_pairwise_distance",
    "model_weights",
    "naive_coding_forecast",
    "nwe_weights",
    "quintile_bins",
    "scott_bandwidths",
    "seasonal_naive",
    "sigma_from_a",
    "split_train_test",
    "synthetic_corpus",
    "synthetic_series",
    "validate_csv",
    "window_coding",
    "write_csv",
    "yearly_codings",
]
