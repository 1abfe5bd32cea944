"""Walkthrough: the four similarity-weighting laws and forecast aggregation.

Every model here answers one question: given a query pattern, how much
should each historical pattern's outcome count? The answer is always a
nonnegative weight vector summing to one; the models differ in how sharply
the weights fall off with distance.
"""

import numpy as np

from psfm import (
    EncodingSpec,
    ModelConfig,
    aggregate,
    build_pairs,
    decode_y,
    encode_x,
    fnm_weights,
    forecast,
    grnn_weights,
    knn_weights,
    nwe_weights,
    synthetic_series,
)

np.set_printoptions(precision=4, suppress=True)

series = synthetic_series(country_code="DEMO", years=8, rng=7)
spec = EncodingSpec()
dataset = build_pairs(series, spec)
query, query_coding = encode_x(series.demand[-12:], spec)
d = np.sqrt(((dataset.x_matrix - query) ** 2).sum(axis=1))
print(f"{len(dataset)} training pairs; query distances range {d.min():.3f}..{d.max():.3f}")

# k-NN: uniform 1/k over the k nearest patterns, everything else zero.
w_knn = knn_weights(query, dataset, k=5)
print("\nk-NN (k=5): nonzero weights ->", np.sort(w_knn[w_knn > 0])[::-1])

# Weighted k-NN: inside the neighborhood, weights shrink from the nearest
# neighbor down to zero at the k-th.
w_knnw = knn_weights(query, dataset, k=5, rho=1.0, gamma=0.0)
print("k-NNw (rho=1, gamma=0):        ", np.sort(w_knnw[w_knnw > 0])[::-1])

# Fuzzy neighborhood: every pattern participates via exp(-(d/sigma)^alpha).
sigma = np.median(d)
w_fnm = fnm_weights(query, dataset, sigma=sigma, alpha=2.0)
print(f"FNM (sigma={sigma:.3f}): top weights", np.sort(w_fnm)[::-1][:5])

# Product-kernel regression and GRNN with matched bandwidths coincide with
# FNM at alpha=2: three parameterizations of one estimator.
w_nwe = nwe_weights(query, dataset, np.full(12, sigma / np.sqrt(2)))
w_grnn = grnn_weights(query, dataset, sigma)
print("max |FNM - NWE| :", np.abs(w_fnm - w_nwe).max())
print("max |FNM - GRNN|:", np.abs(w_fnm - w_grnn).max())

for name, w in (("knn", w_knn), ("knnw", w_knnw), ("fnm", w_fnm), ("nwe", w_nwe), ("grnn", w_grnn)):
    assert w.min() >= 0 and abs(w.sum() - 1) < 1e-12, name

# Aggregation is a convex combination of the paired y-patterns, so the
# forecast pattern always stays inside the envelope of history.
y_hat = aggregate(w_fnm, dataset)
print("\nforecast pattern:", y_hat)
print("decoded MWh:     ", decode_y(y_hat, query_coding, spec))

# The one-call pipeline does encode -> weight -> aggregate -> decode.
print("\nforecast():      ", forecast(series, ModelConfig(kind="fnm", sigma=sigma), spec))
