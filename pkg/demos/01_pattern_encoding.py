"""Walkthrough: turning raw monthly demand windows into shape patterns.

A monthly demand series mixes three things: a level that drifts over the
years (trend), a repeating within-year shape, and noise. Pattern encoding
strips the first so that models can compare the second.
"""

import numpy as np

from psfm import (
    CodingVariables,
    EncodingSpec,
    build_pairs,
    decode_y,
    encode_x,
    encode_y,
    synthetic_series,
)

np.set_printoptions(precision=4, suppress=True)

# A 6-year series with a rising trend and a fixed annual shape.
series = synthetic_series(country_code="DEMO", years=6, base=80_000, trend_per_year=3_000, rng=42)
print("series:", len(series), "months,", series.start, "to", series.end)

# Take two one-year windows from different years. Raw levels differ a lot...
early = series.demand[0:12]
late = series.demand[48:60]
print("\nearly year:", early)
print("late year: ", late)
print("level gap:", late.mean() - early.mean(), "MWh")

# ...but their shapes are nearly the same. The four encodings expose that.
for definition in ("raw", "centered", "ratio", "standardized"):
    spec = EncodingSpec(x_definition=definition, n=12)
    p_early, _ = encode_x(early, spec)
    p_late, _ = encode_x(late, spec)
    gap = np.linalg.norm(p_late - p_early)
    print(f"{definition:>12}: pattern distance between the two years = {gap:.4f}")

# The standardized encoding divides by the dispersion (root of summed squared
# deviations), so every non-constant window lands on the unit sphere with
# zero mean: trend and variance are both filtered out.
pattern, coding = encode_x(late, EncodingSpec(n=12))
print("\nstandardized pattern:", pattern)
print("mean:", pattern.mean(), " norm:", np.linalg.norm(pattern))
print("coding variables: mean =", coding.mean, " dispersion =", coding.dispersion)

# y-patterns use *supplied* coding variables, because at forecast time the
# target window's statistics are unknown. Decoding inverts the mapping.
target = series.demand[60:72]
coding_vars = CodingVariables(coding.mean, coding.dispersion)
spec = EncodingSpec(n=12, m=12)
y = encode_y(target, coding_vars, spec)
recovered = decode_y(y, coding_vars, spec)
print("\nround trip max error:", np.abs(recovered - target).max(), "MWh")

# build_pairs slides both windows across the series, one month at a time.
dataset = build_pairs(series, EncodingSpec())
print("\ntraining pairs:", len(dataset), "(= L - n - m - tau + 2 =", len(series) - 12 - 12 - 1 + 2, ")")
print("first pair anchors at month index", dataset.pairs[0].anchor_index)
