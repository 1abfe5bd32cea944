"""Batch orchestration and CLI: validate, assumption, forecast, rank.

Subcommands
-----------
validate    check a corpus CSV and report per-country problems
assumption  run the similarity-assumption chi-squared test per country
forecast    tune every requested model per country, forecast the test year,
            score against the actuals and a seasonal-naive baseline
rank        recompute model rankings from one or more report.json files

`--data` accepts either a corpus CSV path or the scheme
``synthetic:<count>x<years>`` which generates a seeded corpus (see --seed).
A config file (``key = value`` lines, same keys as the long flags) can hold
any option; explicit flags override it. Exit codes: 0 success, 1 input or
validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from psfm.diagnostics import (
    ChiSquaredResult,
    MetricsReport,
    chi_squared_independence,
    distance_samples,
    error_metrics,
    seasonal_naive,
)
from psfm.models import MODEL_KINDS, forecast
from psfm.pattern_codec import (
    CodingVariables,
    EncodingSpec,
    build_pairs,
    load_coding_csv,
    window_coding,
)
from psfm.series_store import (
    MonthlyLoadSeries,
    SeriesCollection,
    load_csv,
    split_train_test,
    validate_csv,
)
from psfm.synthetic import synthetic_corpus
from psfm.tuner import GridSpec, TuneResult, grid_search

BASELINE = "seasonal_naive"
MODEL_ORDER = MODEL_KINDS + (BASELINE,)

METRIC_FIELDS = ("median_ape", "mape", "iqr_ape", "rmse")


@dataclass(frozen=True)
class RunConfig:
    """Resolved options for one benchmark run."""

    data: str
    test_year: int | None = None
    models: tuple[str, ...] = MODEL_KINDS
    n: int | None = None
    m: int = 12
    tau: int = 1
    x_definition: str = "standardized"
    y_definition: str = "standardized"
    coding: str = "history"  # history | external:<path> | drift
    grid: GridSpec = field(default_factory=GridSpec)
    out: str = "psfm-out"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        for kind in self.models:
            if kind not in MODEL_KINDS:
                raise ValueError(f"unknown model kind {kind!r}")
        if self.coding not in ("history", "drift") and not self.coding.startswith("external:"):
            raise ValueError(f"coding must be history, drift, or external:<path>, got {self.coding!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def naive_coding_forecast(history, method: str = "drift") -> CodingVariables:
    """Project the next coding variables from their yearly history.

    ``last`` repeats the previous year's values; ``drift`` extrapolates
    linearly from the last two. A dispersion projected below 0 is clamped to
    0 (a warning is emitted) since dispersion cannot be negative.
    """
    hist = list(history)
    if method == "last":
        if not hist:
            raise ValueError("'last' coding forecast needs at least 1 historical value")
        return hist[-1]
    if method != "drift":
        raise ValueError(f"unknown coding forecast method {method!r}")
    if len(hist) < 2:
        raise ValueError("'drift' coding forecast needs at least 2 historical values")
    prev, last = hist[-2], hist[-1]
    mean = last.mean + (last.mean - prev.mean)
    dispersion = last.dispersion + (last.dispersion - prev.dispersion)
    if dispersion < 0:
        warnings.warn("dispersion drift projected below 0; clamped to 0", stacklevel=2)
        dispersion = 0.0
    return CodingVariables(mean, dispersion)


def yearly_codings(series: MonthlyLoadSeries) -> list[CodingVariables]:
    """Coding variables of every complete calendar year, oldest first."""
    out = []
    for year in range(int(series.years[0]), int(series.years[-1]) + 1):
        i = series.index_of(year, 1)
        if i >= 0 and series.index_of(year, 12) == i + 11:
            out.append(window_coding(series.demand[i : i + 12]))
    return out


# ---------------------------------------------------------------------------
# corpus loading


def load_corpus(config: RunConfig) -> SeriesCollection:
    if config.data.startswith("synthetic:"):
        spec = config.data.split(":", 1)[1]
        try:
            count, years = (int(v) for v in spec.split("x", 1))
        except ValueError:
            raise ValueError(f"bad synthetic scheme {config.data!r}; expected synthetic:<count>x<years>")
        return synthetic_corpus(count=count, years=years, seed=config.seed)
    if not Path(config.data).exists():
        raise ValueError(f"data file not found: {config.data}")
    return load_csv(config.data)


# ---------------------------------------------------------------------------
# per-country pipeline


def _history_before(series: MonthlyLoadSeries, test_year: int | None) -> MonthlyLoadSeries:
    if test_year is None:
        return series
    i0 = series.index_of(test_year, 1)
    if i0 < 0:
        return series
    if i0 == 0:
        raise ValueError(f"{series.country_code}: no history before {test_year}")
    return series.slice(0, i0)


def _assumption_entry(history: MonthlyLoadSeries, spec: EncodingSpec):
    """Chi-squared result for one series, or (None, reason) when it cannot run."""
    try:
        dataset = build_pairs(history, spec)
        samples = distance_samples(dataset)
        result = chi_squared_independence(samples)
        return result, len(dataset), samples.shape[0], None
    except ValueError as exc:
        return None, 0, 0, str(exc)


def _coding_override(train, config, coding_lookup):
    if config.coding == "history":
        return None
    if config.coding == "drift":
        return naive_coding_forecast(yearly_codings(train), "drift")
    key = (train.country_code, config.test_year)
    if key not in coding_lookup:
        raise ValueError(f"{train.country_code}: no external coding variables for {config.test_year}")
    return coding_lookup[key]


def _hyperparams(kind: str, tune: TuneResult) -> dict:
    point = next(p for p in tune.grid_trace if p.config is tune.best_config)
    out: dict = {"n": tune.best_spec.n}
    if kind in ("knn", "knn_weighted"):
        out["k"] = int(point.value)
    elif kind in ("fnm", "grnn"):
        out["a"] = point.value
        out["sigma"] = tune.best_config.sigma
    else:
        out["b"] = point.value
    return out


def _metrics_dict(metrics: MetricsReport) -> dict:
    return {f: getattr(metrics, f) for f in METRIC_FIELDS}


def _chi_dict(result: ChiSquaredResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "statistic": result.statistic,
        "dof": result.dof,
        "critical_value": result.critical_value,
        "reject_null": result.reject_null,
    }


def _run_country(series: MonthlyLoadSeries, config: RunConfig, spec_template: EncodingSpec, coding_lookup):
    min_train = min(config.grid.n_values) + config.m + config.tau - 1
    train, _test = split_train_test(series, config.test_year, min_train)

    # target months start tau months after the training window's last month
    first = len(train) - 1 + config.tau
    positions = np.arange(first, first + config.m)
    if positions[-1] >= len(series):
        raise ValueError(f"{series.country_code}: forecast targets extend beyond the series end")
    actual = series.demand[positions]
    target_years = series.years[positions]
    target_months = series.months[positions]

    chi, _, _, chi_note = _assumption_entry(
        train, spec_template.with_n(config.n if config.n is not None else 12)
    )

    naive = seasonal_naive(train, config.tau + config.m - 1)[config.tau - 1 :]
    model_rows = {
        BASELINE: {
            "metrics": _metrics_dict(error_metrics(actual, naive)),
            "hyperparameters": {},
            "cv_error": None,
        }
    }
    forecasts = {BASELINE: naive}

    override = _coding_override(train, config, coding_lookup)
    for kind in config.models:
        tune = grid_search(train, spec_template, kind, config.grid)
        predicted = forecast(train, tune.best_config, tune.best_spec, override)
        model_rows[kind] = {
            "metrics": _metrics_dict(error_metrics(actual, predicted)),
            "hyperparameters": _hyperparams(kind, tune),
            "cv_error": tune.cv_error,
        }
        forecasts[kind] = predicted

    entry = {
        "chi_squared": _chi_dict(chi),
        "chi_note": chi_note,
        "models": model_rows,
    }
    targets = (target_years, target_months, actual)
    return entry, targets, forecasts


# ---------------------------------------------------------------------------
# report assembly


def aggregate_from_per_country(per_country: dict, models) -> dict:
    """Mean of each per-country metric over countries, per model."""
    out = {}
    for model in models:
        rows = [c["models"][model]["metrics"] for c in per_country.values() if model in c["models"]]
        if rows:
            out[model] = {f: float(np.mean([r[f] for r in rows])) for f in METRIC_FIELDS}
    return out


def rankings_from_per_country(per_country: dict, models) -> dict:
    """Two orderings: by aggregate median APE, and by mean per-country MAPE rank."""
    models = [m for m in models if all(m in c["models"] for c in per_country.values())]
    order_index = {m: MODEL_ORDER.index(m) if m in MODEL_ORDER else len(MODEL_ORDER) for m in models}

    aggregate = aggregate_from_per_country(per_country, models)
    by_median = sorted(models, key=lambda m: (aggregate[m]["median_ape"], order_index[m]))

    mean_ranks = {}
    if per_country:
        ranks = np.zeros(len(models))
        for entry in per_country.values():
            mapes = np.array([entry["models"][m]["metrics"]["mape"] for m in models])
            ranks += rankdata(mapes, method="average")
        mean_ranks = {m: float(r / len(per_country)) for m, r in zip(models, ranks)}
    by_rank = sorted(models, key=lambda m: (mean_ranks.get(m, 0.0), order_index[m]))

    return {
        "by_median_ape": [[m, aggregate[m]["median_ape"]] for m in by_median],
        "by_mean_rank": [[m, mean_ranks.get(m, 0.0)] for m in by_rank],
    }


@dataclass
class EvaluationReport:
    """Per-country and aggregate scores plus deterministic model rankings."""

    test_year: int | None
    models: tuple[str, ...]
    per_country: dict
    failures: dict
    aggregate: dict
    ranking: dict

    def to_dict(self) -> dict:
        return {
            "test_year": self.test_year,
            "models": list(self.models),
            "per_country": self.per_country,
            "failures": self.failures,
            "aggregate": self.aggregate,
            "ranking": self.ranking,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationReport":
        return cls(
            test_year=data.get("test_year"),
            models=tuple(data.get("models", ())),
            per_country=data.get("per_country", {}),
            failures=data.get("failures", {}),
            aggregate=data.get("aggregate", {}),
            ranking=data.get("ranking", {}),
        )


def build_report(config: RunConfig, per_country: dict, failures: dict) -> EvaluationReport:
    models = tuple(config.models) + (BASELINE,)
    return EvaluationReport(
        test_year=config.test_year,
        models=models,
        per_country=per_country,
        failures=failures,
        aggregate=aggregate_from_per_country(per_country, models),
        ranking=rankings_from_per_country(per_country, models) if per_country else {},
    )


# ---------------------------------------------------------------------------
# commands


def cmd_validate(config: RunConfig) -> int:
    if config.data.startswith("synthetic:"):
        corpus = load_corpus(config)
        for s in corpus:
            print(f"{s.country_code}: {len(s)} months {s.start[0]:04d}-{s.start[1]:02d}..{s.end[0]:04d}-{s.end[1]:02d} OK")
        print(f"{len(corpus)} series, all valid (synthetic)")
        return 0
    if not Path(config.data).exists():
        raise ValueError(f"data file not found: {config.data}")
    result = validate_csv(config.data)
    for issue in result.parse_issues:
        print(f"PARSE ERROR: {issue}")
    for s in result.summaries:
        span = ""
        if s.start and s.end:
            span = f" {s.start[0]:04d}-{s.start[1]:02d}..{s.end[0]:04d}-{s.end[1]:02d}"
        if s.ok:
            print(f"{s.country_code}: {s.n_months} months{span} OK")
        else:
            print(f"{s.country_code}: {s.n_months} rows{span} INVALID: {'; '.join(s.problems)}")
    n_bad = sum(not s.ok for s in result.summaries)
    print(f"{len(result.summaries)} series, {n_bad} invalid, {len(result.parse_issues)} parse issues")
    return 0 if result.ok else 1


def cmd_assumption(config: RunConfig) -> int:
    corpus = load_corpus(config)
    spec = EncodingSpec(
        x_definition=config.x_definition,
        y_definition=config.y_definition,
        n=config.n if config.n is not None else 12,
        m=config.m,
        tau=config.tau,
        coding_mode="history",
    )
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for series in corpus:
        history = _history_before(series, config.test_year)
        result, n_pairs, n_samples, note = _assumption_entry(history, spec)
        rows.append((series.country_code, n_pairs, n_samples, result, note))
    path = out_dir / "assumption.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["country", "n_pairs", "n_samples", "statistic", "dof", "critical_value", "reject_null", "note"]
        )
        for code, n_pairs, n_samples, result, note in rows:
            if result is None:
                writer.writerow([code, n_pairs, n_samples, "", "", "", "", note])
            else:
                writer.writerow(
                    [code, n_pairs, n_samples, repr(result.statistic), result.dof,
                     repr(result.critical_value), result.reject_null, ""]
                )
    for code, n_pairs, n_samples, result, note in rows:
        if result is None:
            print(f"{code}: skipped ({note})")
        else:
            verdict = "similarity assumption supported" if result.reject_null else "independence not rejected"
            print(f"{code}: chi2={result.statistic:.2f} critical={result.critical_value:.2f} -> {verdict}")
    print(f"wrote {path}")
    return 0


def cmd_tune_forecast(config: RunConfig) -> int:
    if config.test_year is None:
        raise ValueError("forecast requires --test-year")
    corpus = load_corpus(config)
    coding_lookup = {}
    if config.coding.startswith("external:"):
        coding_lookup = load_coding_csv(config.coding.split(":", 1)[1])
    spec_template = EncodingSpec(
        x_definition=config.x_definition,
        y_definition=config.y_definition,
        n=12,
        m=config.m,
        tau=config.tau,
        coding_mode="history" if config.coding == "history" else "external",
    )

    def run_one(series):
        try:
            return series.country_code, _run_country(series, config, spec_template, coding_lookup), None
        except ValueError as exc:
            return series.country_code, None, str(exc)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(run_one, corpus))
    else:
        results = [run_one(s) for s in corpus]

    out_dir = Path(config.out)
    forecasts_dir = out_dir / "forecasts"
    forecasts_dir.mkdir(parents=True, exist_ok=True)

    per_country: dict = {}
    failures: dict = {}
    for code, payload, error in results:
        if error is not None:
            failures[code] = error
            continue
        entry, targets, forecasts = payload
        per_country[code] = entry
        target_years, target_months, actual = targets
        for model, values in forecasts.items():
            fpath = forecasts_dir / f"{code}_{model}.csv"
            with open(fpath, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["country", "year", "month", "actual", "forecast"])
                for y, mo, a, f in zip(target_years, target_months, actual, values):
                    writer.writerow([code, int(y), int(mo), repr(float(a)), repr(float(f))])

    report = build_report(config, per_country, failures)
    (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
    _write_aggregate_csv(out_dir / "aggregate.csv", report)
    _print_report_summary(report)
    print(f"wrote {out_dir / 'report.json'}")
    if failures and not per_country:
        return 2
    return 0


def _write_aggregate_csv(path: Path, report: EvaluationReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", *METRIC_FIELDS])
        for model in MODEL_ORDER:
            if model in report.aggregate:
                row = report.aggregate[model]
                writer.writerow([model, *(repr(row[f]) for f in METRIC_FIELDS)])


def _print_report_summary(report: EvaluationReport) -> None:
    if report.aggregate:
        print(f"{'model':<16} {'medAPE':>8} {'MAPE':>8} {'IQR':>8} {'RMSE':>12}")
        for model in MODEL_ORDER:
            if model in report.aggregate:
                row = report.aggregate[model]
                print(
                    f"{model:<16} {row['median_ape']:>8.2f} {row['mape']:>8.2f} "
                    f"{row['iqr_ape']:>8.2f} {row['rmse']:>12.1f}"
                )
    if report.ranking:
        by_med = ", ".join(m for m, _ in report.ranking["by_median_ape"])
        by_rank = ", ".join(m for m, _ in report.ranking["by_mean_rank"])
        print(f"ranking by median APE: {by_med}")
        print(f"ranking by mean per-country rank: {by_rank}")
    for code, reason in sorted(report.failures.items()):
        print(f"FAILED {code}: {reason}")


def cmd_rank(report_paths, out: str | None = None) -> int:
    per_country: dict = {}
    models: tuple[str, ...] = ()
    test_year = None
    for path in report_paths:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        report = EvaluationReport.from_dict(data)
        per_country.update(report.per_country)  # later files win on shared countries
        models = tuple(dict.fromkeys(models + report.models))
        test_year = report.test_year if test_year is None else test_year
    if not per_country:
        raise ValueError("no per-country results found in the given reports")
    ranking = rankings_from_per_country(per_country, models)
    print(f"{'model':<16} {'median_ape':>12} {'mean_rank':>12}")
    med = dict((m, v) for m, v in ranking["by_median_ape"])
    ranks = dict((m, v) for m, v in ranking["by_mean_rank"])
    for model, _ in ranking["by_median_ape"]:
        print(f"{model:<16} {med[model]:>12.3f} {ranks[model]:>12.3f}")
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "ranking.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["model", "median_ape", "mean_rank"])
            for model, _ in ranking["by_median_ape"]:
                writer.writerow([model, repr(med[model]), repr(ranks[model])])
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# CLI plumbing


DEFAULTS = {
    "data": None,
    "test_year": None,
    "models": ",".join(MODEL_KINDS),
    "n": None,
    "m": 12,
    "tau": 1,
    "x_definition": "standardized",
    "y_definition": "standardized",
    "coding": "history",
    "grid_n": None,
    "grid_k": None,
    "grid_a": None,
    "grid_b": None,
    "out": "psfm-out",
    "jobs": 1,
    "seed": 0,
}

_INT_KEYS = {"test_year", "n", "m", "tau", "jobs", "seed"}


def parse_int_list(text: str) -> tuple[int, ...]:
    """Either ``lo..hi`` (inclusive) or a comma-separated list."""
    s = text.strip()
    if ".." in s:
        lo, hi = s.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in s.split(","))


def parse_float_list(text: str) -> tuple[float, ...]:
    """Either ``start:step:stop`` (inclusive) or a comma-separated list."""
    s = text.strip()
    if ":" in s:
        start, step, stop = (float(t) for t in s.split(":"))
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(v) for v in np.round(start + step * np.arange(count), 10))
    return tuple(float(t) for t in s.split(","))


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path} line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip().lower().replace("-", "_")] = value.strip()
    return out


def resolve_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        for key, raw in read_config_file(config_path).items():
            if key not in DEFAULTS:
                raise ValueError(f"unknown config key {key!r}")
            opts[key] = int(raw) if key in _INT_KEYS else raw
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def build_run_config(opts: dict) -> RunConfig:
    if not opts["data"]:
        raise ValueError("--data is required (CSV path or synthetic:<count>x<years>)")
    models = tuple(t.strip() for t in str(opts["models"]).split(",") if t.strip())
    grid_kwargs = {}
    if opts["n"] is not None:
        grid_kwargs["n_values"] = (int(opts["n"]),)
    elif opts["grid_n"]:
        grid_kwargs["n_values"] = parse_int_list(str(opts["grid_n"]))
    if opts["grid_k"]:
        grid_kwargs["k_values"] = parse_int_list(str(opts["grid_k"]))
    if opts["grid_a"]:
        grid_kwargs["a_values"] = parse_float_list(str(opts["grid_a"]))
    if opts["grid_b"]:
        grid_kwargs["b_values"] = parse_float_list(str(opts["grid_b"]))
    return RunConfig(
        data=str(opts["data"]),
        test_year=opts["test_year"],
        models=models,
        n=opts["n"],
        m=int(opts["m"]),
        tau=int(opts["tau"]),
        x_definition=str(opts["x_definition"]),
        y_definition=str(opts["y_definition"]),
        coding=str(opts["coding"]),
        grid=GridSpec(**grid_kwargs),
        out=str(opts["out"]),
        jobs=int(opts["jobs"]),
        seed=int(opts["seed"]),
    )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value options file; flags override it")
    parser.add_argument("--data", help="corpus CSV path or synthetic:<count>x<years>")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--jobs", type=int, help="parallel workers across countries")
    parser.add_argument("--seed", type=int, help="seed for synthetic data schemes")


def _add_encoding(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--test-year", type=int, dest="test_year")
    parser.add_argument("--n", type=int, help="fix the input window length instead of tuning it")
    parser.add_argument("--m", type=int, help="forecast window length in months")
    parser.add_argument("--tau", type=int, help="forecast horizon offset in months")
    parser.add_argument("--x-definition", dest="x_definition", choices=("raw", "centered", "ratio", "standardized"))
    parser.add_argument("--y-definition", dest="y_definition", choices=("raw", "centered", "ratio", "standardized"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psfm", description="Pattern similarity-based forecasting benchmark"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a corpus CSV")
    _add_common(p_val)
    p_val.set_defaults(entry="validate")

    p_ass = sub.add_parser("assumption", help="chi-squared similarity-assumption test per country")
    _add_common(p_ass)
    _add_encoding(p_ass)
    p_ass.set_defaults(entry="assumption")

    p_fc = sub.add_parser("forecast", help="tune, forecast, and score every model per country")
    _add_common(p_fc)
    _add_encoding(p_fc)
    p_fc.add_argument("--models", help="comma list of model kinds to run")
    p_fc.add_argument("--coding", help="history | external:<path> | drift")
    p_fc.add_argument("--grid-n", dest="grid_n", help="n grid, e.g. 3..24 or 6,12,18")
    p_fc.add_argument("--grid-k", dest="grid_k", help="k grid, e.g. 1..50")
    p_fc.add_argument("--grid-a", dest="grid_a", help="a grid, e.g. 0.02:0.02:1")
    p_fc.add_argument("--grid-b", dest="grid_b", help="b grid, e.g. 0.15:0.05:2")
    p_fc.set_defaults(entry="forecast")

    p_rank = sub.add_parser("rank", help="recompute rankings from report.json files")
    p_rank.add_argument("reports", nargs="+", help="one or more report.json paths")
    p_rank.add_argument("--out", help="output directory for ranking.csv")
    p_rank.set_defaults(entry="rank")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.entry == "rank":
            return cmd_rank(args.reports, out=args.out)
        config = build_run_config(resolve_options(args))
        if args.entry == "validate":
            return cmd_validate(config)
        if args.entry == "assumption":
            return cmd_assumption(config)
        return cmd_tune_forecast(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
