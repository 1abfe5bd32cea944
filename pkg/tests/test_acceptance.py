"""Acceptance suite: one test per release criterion, each printing a PASS line.

Criterion 7 (real-corpus reproduction) needs the 35-country monthly corpus,
which is not distributed with the package; point PSFM_ENTSOE_CSV at a corpus
CSV (through 2014) to enable it. Without it, criteria 1-6 are the gate.
"""

import math
import os
import time

import numpy as np
import pytest

from psfm.diagnostics import (
    CHI2_CRITICAL_5X5,
    chi_squared_independence,
    error_metrics,
    seasonal_naive,
)
from psfm.models import (
    ModelConfig,
    fnm_weights,
    grnn_weights,
    model_weights,
    nwe_weights,
)
from psfm.pattern_codec import (
    CodingVariables,
    EncodingSpec,
    PatternDataset,
    build_pairs,
    decode_y,
    encode_x,
    encode_y,
)
from psfm.series_store import load_csv, split_train_test
from psfm.synthetic import synthetic_corpus
from psfm.tuner import GridSpec, grid_search, loocv_error

from conftest import make_series
from test_tuner import brute_force_loocv

PSFM_KINDS = ("knn", "knn_weighted", "fnm", "nwe", "grnn")
WEIGHTED_KINDS = ("knn_weighted", "fnm", "nwe", "grnn")


def _random_dataset(rng):
    N = int(rng.integers(3, 31))
    n = int(rng.integers(2, 15))
    m = int(rng.integers(1, 13))
    X = rng.normal(size=(N, n)) * rng.uniform(0.5, 3.0)
    Y = rng.normal(size=(N, m))
    return PatternDataset.from_arrays(X, Y)


def _random_config(kind, dataset, rng):
    n = dataset.x_matrix.shape[1]
    N = len(dataset)
    if kind == "knn":
        return ModelConfig(kind="knn", k=int(rng.integers(1, N + 1)))
    if kind == "knn_weighted":
        return ModelConfig(
            kind="knn_weighted",
            k=int(rng.integers(1, N + 1)),
            rho=float(rng.uniform(0, 1)),
            gamma=float(rng.uniform(-1, 3)),
        )
    if kind == "fnm":
        return ModelConfig(kind="fnm", sigma=float(rng.uniform(0.05, 4)), alpha=float(rng.uniform(0.5, 4)))
    if kind == "nwe":
        return ModelConfig(kind="nwe", bandwidths=tuple(rng.uniform(0.05, 3, size=n)))
    return ModelConfig(kind="grnn", sigma=float(rng.uniform(0.05, 4)))


def test_criterion_1_weight_laws():
    rng = np.random.default_rng(1001)
    t0 = time.perf_counter()
    per_kind = 1000
    for kind in PSFM_KINDS:
        for _ in range(per_kind):
            ds = _random_dataset(rng)
            q = rng.normal(size=ds.x_matrix.shape[1])
            w = model_weights(q, ds, _random_config(kind, ds, rng))
            assert w.min() >= 0.0
            assert abs(w.sum() - 1.0) <= 1e-12
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    print(
        f"[ACCEPTANCE] criterion 1 PASS: {per_kind} instances x {len(PSFM_KINDS)} kinds, "
        f"weights >= 0 and sum to 1 within 1e-12 ({elapsed:.1f}s)"
    )


def test_criterion_2_equivalence_triple():
    rng = np.random.default_rng(1002)
    t0 = time.perf_counter()
    for _ in range(100):
        ds = _random_dataset(rng)
        n = ds.x_matrix.shape[1]
        q = rng.normal(size=n)
        sigma = float(rng.uniform(0.1, 3.0))
        w_grnn = grnn_weights(q, ds, sigma)
        w_fnm = fnm_weights(q, ds, sigma=sigma, alpha=2.0)
        w_nwe = nwe_weights(q, ds, np.full(n, sigma / math.sqrt(2)))
        np.testing.assert_allclose(w_grnn, w_fnm, atol=1e-9)
        np.testing.assert_allclose(w_nwe, w_fnm, atol=1e-9)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(
        f"[ACCEPTANCE] criterion 2 PASS: grnn == fnm(alpha=2) == nwe(h=sigma/sqrt(2)) "
        f"within 1e-9 on 100 instances ({elapsed:.1f}s)"
    )


def test_criterion_3_codec_round_trip():
    rng = np.random.default_rng(1003)
    definitions = ("raw", "centered", "ratio", "standardized")
    m = 12
    for _ in range(1000):
        window = rng.uniform(20.0, 2000.0, size=m)
        coding = CodingVariables(float(rng.uniform(10.0, 2000.0)), float(rng.uniform(0.5, 400.0)))
        for definition in definitions:
            # y route: encode with supplied coding variables, then invert
            spec_y = EncodingSpec(y_definition=definition, n=m, m=m)
            back = decode_y(encode_y(window, coding, spec_y), coding, spec_y)
            np.testing.assert_allclose(back, window, rtol=1e-10)
            # x route: encode with the window's own coding variables, then invert
            spec_x = EncodingSpec(x_definition=definition, y_definition=definition, n=m, m=m)
            pattern, own_coding = encode_x(window, spec_x)
            back_x = decode_y(pattern, own_coding, spec_x)
            np.testing.assert_allclose(back_x, window, rtol=1e-10)
        pattern, _ = encode_x(window, EncodingSpec(n=m, m=m))
        assert abs(pattern.mean()) <= 1e-12
        assert abs(np.linalg.norm(pattern) - 1.0) <= 1e-12
    print(
        "[ACCEPTANCE] criterion 3 PASS: decode(encode) identity within 1e-10 for all four "
        "definitions on 1000 windows; standardized patterns zero-mean unit-norm within 1e-12"
    )


def test_criterion_4_loocv_matches_brute_force():
    rng = np.random.default_rng(1004)
    spec = EncodingSpec()
    checked = 0
    for i in range(50):
        L = int(rng.integers(25, 34))  # 2..10 pairs under the default geometry
        series = make_series(rng.uniform(50.0, 800.0, size=L), country=f"R{i:02d}")
        dataset = build_pairs(series, spec)
        assert 2 <= len(dataset) <= 10
        for kind in PSFM_KINDS:
            config = _random_config(kind, dataset, rng)
            fast = loocv_error(dataset, config)
            brute = brute_force_loocv(dataset, config)
            assert fast == pytest.approx(brute, abs=1e-12)
            checked += 1
    print(
        f"[ACCEPTANCE] criterion 4 PASS: loocv_error matches the brute-force fold loop "
        f"within 1e-12 on {checked} (dataset, config) cases with N <= 10"
    )


def test_criterion_5_chi_squared_calibration():
    assert CHI2_CRITICAL_5X5 == pytest.approx(26.30, abs=0.01)
    rng = np.random.default_rng(1005)
    t0 = time.perf_counter()
    draws = 2000
    rejections = 0
    for _ in range(draws):
        samples = rng.uniform(size=(10_000, 2))
        rejections += chi_squared_independence(samples).reject_null
    rate = rejections / draws
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    assert 0.035 <= rate <= 0.065
    print(
        f"[ACCEPTANCE] criterion 5 PASS: critical value {CHI2_CRITICAL_5X5:.3f} (26.30 +/- 0.01); "
        f"null rejection rate {100 * rate:.2f}% in [3.5%, 6.5%] over {draws} draws ({elapsed:.1f}s)"
    )


def test_criterion_6_synthetic_benchmark():
    t0 = time.perf_counter()
    corpus = synthetic_corpus(count=10, years=20, noise=0.02, seed=1006)
    test_year = 2014
    # trimmed n grid keeps the desk-scale run fast; k/a/b sweep the full defaults
    grid = GridSpec(n_values=(6, 12, 18, 24))
    spec_template = EncodingSpec()
    mapes: dict[str, list[float]] = {kind: [] for kind in PSFM_KINDS}
    naive_mapes = []
    for series in corpus:
        train, test = split_train_test(series, test_year, min_train_months=24)
        naive_mape = error_metrics(test.demand, seasonal_naive(train, 12)).mape
        naive_mapes.append(naive_mape)
        for kind in PSFM_KINDS:
            tune = grid_search(train, spec_template, kind, grid)
            from psfm.models import forecast

            predicted = forecast(train, tune.best_config, tune.best_spec)
            mape = error_metrics(test.demand, predicted).mape
            mapes[kind].append(mape)
            assert mape < naive_mape, (
                f"{series.country_code}/{kind}: MAPE {mape:.3f} not below seasonal naive {naive_mape:.3f}"
            )
            if kind in WEIGHTED_KINDS:
                assert mape < 3.0, f"{series.country_code}/{kind}: MAPE {mape:.3f} >= 3%"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    summary = ", ".join(f"{kind} {np.mean(mapes[kind]):.2f}%" for kind in PSFM_KINDS)
    print(
        f"[ACCEPTANCE] criterion 6 PASS: every tuned model beat seasonal naive "
        f"(naive {np.mean(naive_mapes):.2f}%) on 10 seeded series; {summary}; "
        f"weighted models under 3% ({elapsed:.1f}s)"
    )


TABLE_MAPE = {"knn": 5.19, "knn_weighted": 4.99, "fnm": 4.88, "nwe": 5.00, "grnn": 5.01}


@pytest.mark.skipif(
    "PSFM_ENTSOE_CSV" not in os.environ,
    reason="real 35-country corpus not available; set PSFM_ENTSOE_CSV to enable",
)
def test_criterion_7_corpus_reproduction():
    corpus = load_csv(os.environ["PSFM_ENTSOE_CSV"])
    test_year = int(os.environ.get("PSFM_ENTSOE_TEST_YEAR", "2014"))
    grid = GridSpec()
    spec_template = EncodingSpec()
    per_model: dict[str, list[float]] = {kind: [] for kind in PSFM_KINDS}
    for series in corpus:
        try:
            train, test = split_train_test(series, test_year, min_train_months=24)
        except ValueError:
            continue
        for kind in PSFM_KINDS:
            tune = grid_search(train, spec_template, kind, grid)
            from psfm.models import forecast

            predicted = forecast(train, tune.best_config, tune.best_spec)
            per_model[kind].append(error_metrics(test.demand, predicted).mape)
    aggregate = {kind: float(np.mean(v)) for kind, v in per_model.items()}
    # hard criterion: every weighted variant beats plain k-NN on corpus MAPE
    for kind in WEIGHTED_KINDS:
        assert aggregate[kind] < aggregate["knn"], aggregate
    # soft criterion: absolute values near the published figures (data vintages differ)
    for kind, expected in TABLE_MAPE.items():
        assert abs(aggregate[kind] - expected) <= 1.0, aggregate
    print(f"[ACCEPTANCE] criterion 7 PASS: corpus MAPEs {aggregate}")
