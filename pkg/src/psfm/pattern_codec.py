"""Map raw demand sequences to shape patterns and back.

An input window of ``n`` consecutive monthly demands is summarized by two
coding variables, its mean and its dispersion (the root of the summed squared
deviations from the mean), and mapped to an x-pattern by one of four
definitions:

* ``raw``          - the window unchanged
* ``centered``     - window minus its mean
* ``ratio``        - window divided by its mean
* ``standardized`` - (window - mean) / dispersion, which has zero mean and
  unit Euclidean norm for any non-constant window

The ``m``-month window starting ``tau`` months after the input window's last
element is mapped to a y-pattern by the same four definitions, but with
*supplied* coding variables: in ``history`` mode the input window's own mean
and dispersion, in ``external`` mode the target window's. Decoding inverts
the y mapping with the same coding variables to recover MWh values.

Constant windows carry no shape information. Instead of failing, the
degenerate cases (zero dispersion for ``standardized``, zero mean for
``ratio``) emit an all-zero or all-one pattern and flag the pair; decoding
such a pattern returns the constant mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterator

import numpy as np

from psfm.series_store import MonthlyLoadSeries

PATTERN_DEFINITIONS = ("raw", "centered", "ratio", "standardized")
CODING_MODES = ("history", "external")

CODING_CSV_HEADER = ("country", "year", "mean_mwh", "dispersion_mwh")


@dataclass(frozen=True)
class EncodingSpec:
    """Pattern definitions and window geometry for one dataset."""

    x_definition: str = "standardized"
    y_definition: str = "standardized"
    n: int = 12
    m: int = 12
    tau: int = 1
    coding_mode: str = "history"

    def __post_init__(self) -> None:
        if self.x_definition not in PATTERN_DEFINITIONS:
            raise ValueError(f"unknown x_definition {self.x_definition!r}")
        if self.y_definition not in PATTERN_DEFINITIONS:
            raise ValueError(f"unknown y_definition {self.y_definition!r}")
        if self.coding_mode not in CODING_MODES:
            raise ValueError(f"unknown coding_mode {self.coding_mode!r}")
        for name in ("n", "m", "tau"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def with_n(self, n: int) -> "EncodingSpec":
        return replace(self, n=int(n))

    @property
    def min_series_length(self) -> int:
        """Shortest series that yields at least one pattern pair."""
        return self.n + self.m + self.tau - 1


@dataclass(frozen=True)
class CodingVariables:
    """Mean and dispersion used to encode y-patterns and decode forecasts."""

    mean: float
    dispersion: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mean) and math.isfinite(self.dispersion)):
            raise ValueError("coding variables must be finite")
        if self.dispersion < 0:
            raise ValueError(f"dispersion must be >= 0, got {self.dispersion!r}")


def window_coding(window: np.ndarray) -> CodingVariables:
    """Mean and dispersion of a window; dispersion is sqrt(sum((w - mean)^2))."""
    w = np.asarray(window, dtype=np.float64)
    mean = float(w.mean())
    return CodingVariables(mean, float(np.sqrt(((w - mean) ** 2).sum())))


def is_degenerate(definition: str, coding: CodingVariables) -> bool:
    """True when the definition cannot be applied and the constant-window rule kicks in."""
    if definition == "standardized":
        return coding.dispersion == 0.0
    if definition == "ratio":
        return coding.mean == 0.0
    return False


def _apply(values: np.ndarray, definition: str, coding: CodingVariables) -> np.ndarray:
    if definition == "raw":
        return values.copy()
    if definition == "centered":
        return values - coding.mean
    if definition == "ratio":
        if coding.mean == 0.0:
            return np.ones_like(values)
        return values / coding.mean
    if coding.dispersion == 0.0:
        return np.zeros_like(values)
    return (values - coding.mean) / coding.dispersion


def _invert(pattern: np.ndarray, definition: str, coding: CodingVariables) -> np.ndarray:
    if definition == "raw":
        return pattern.copy()
    if definition == "centered":
        return pattern + coding.mean
    if definition == "ratio":
        return pattern * coding.mean
    return pattern * coding.dispersion + coding.mean


def _check_window(values, length: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size != length:
        raise ValueError(f"{what} length mismatch: expected {length}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    return arr


def encode_x(window, spec: EncodingSpec) -> tuple[np.ndarray, CodingVariables]:
    """Encode an input window; returns the pattern and the window's coding variables.

    The coding variables are always the window's own mean and dispersion,
    whatever the definition, because they are needed later to decode
    forecasts in history mode.
    """
    w = _check_window(window, spec.n, "x window")
    coding = window_coding(w)
    return _apply(w, spec.x_definition, coding), coding


def encode_y(window, coding: CodingVariables, spec: EncodingSpec) -> np.ndarray:
    """Encode a target window with the supplied coding variables (not recomputed)."""
    w = _check_window(window, spec.m, "y window")
    return _apply(w, spec.y_definition, coding)


def decode_y(pattern, coding: CodingVariables, spec: EncodingSpec) -> np.ndarray:
    """Invert encode_y: map a (forecast) y-pattern back to MWh demands."""
    p = _check_window(pattern, spec.m, "y pattern")
    return _invert(p, spec.y_definition, coding)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float64).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PatternPair:
    """One training example: x-pattern, paired y-pattern, and their coding variables.

    anchor_index is the 0-based position, in the source series, of the last
    element of the input window.
    """

    x: np.ndarray
    y: np.ndarray
    x_coding: CodingVariables
    y_coding: CodingVariables
    anchor_index: int
    degenerate: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _freeze(self.x))
        object.__setattr__(self, "y", _freeze(self.y))


@dataclass(eq=False)
class PatternDataset:
    """The training set of pattern pairs for one series.

    Treated as immutable after construction; the matrix views and the
    pairwise-distance cache are derived lazily and shared by the models and
    the tuner.
    """

    pairs: tuple[PatternPair, ...]
    spec: EncodingSpec
    source_id: str = ""

    def __post_init__(self) -> None:
        self.pairs = tuple(self.pairs)
        if not self.pairs:
            raise ValueError("a PatternDataset needs at least one pair")
        for p in self.pairs:
            if p.x.size != self.spec.n or p.y.size != self.spec.m:
                raise ValueError("pair geometry does not match the encoding spec")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[PatternPair]:
        return iter(self.pairs)

    @cached_property
    def x_matrix(self) -> np.ndarray:
        return np.array([p.x for p in self.pairs])

    @cached_property
    def y_matrix(self) -> np.ndarray:
        return np.array([p.y for p in self.pairs])

    @cached_property
    def anchors(self) -> np.ndarray:
        return np.array([p.anchor_index for p in self.pairs], dtype=np.intp)

    @cached_property
    def y_means(self) -> np.ndarray:
        return np.array([p.y_coding.mean for p in self.pairs])

    @cached_property
    def y_dispersions(self) -> np.ndarray:
        return np.array([p.y_coding.dispersion for p in self.pairs])

    @cached_property
    def pairwise_x_diffs(self) -> np.ndarray:
        """Componentwise differences x_i - x_j, shape (N, N, n)."""
        X = self.x_matrix
        return X[:, None, :] - X[None, :, :]

    @cached_property
    def pairwise_x_distances(self) -> np.ndarray:
        """Euclidean distance matrix between all x-patterns."""
        X = self.x_matrix
        diff = X[:, None, :] - X[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    @cached_property
    def neighbor_order(self) -> np.ndarray:
        """Per row: the other pairs ordered by (distance, anchor_index).

        Row j lists the N-1 indices != j, nearest first; ties at equal
        distance go to the lower anchor. This is the deterministic
        neighbor ordering used by the k-NN models and leave-one-out folds.
        """
        d = self.pairwise_x_distances.copy()
        np.fill_diagonal(d, np.inf)
        n = len(self)
        order = np.empty((n, max(n - 1, 0)), dtype=np.intp)
        for j in range(n):
            order[j] = np.lexsort((self.anchors, d[j]))[: n - 1]
        return order

    @classmethod
    def from_arrays(
        cls,
        x,
        y,
        spec: EncodingSpec | None = None,
        x_codings=None,
        y_codings=None,
        anchors=None,
        source_id: str = "",
    ) -> "PatternDataset":
        """Assemble a dataset directly from pattern matrices (mostly for tests/demos)."""
        X = np.atleast_2d(np.asarray(x, dtype=np.float64))
        Y = np.atleast_2d(np.asarray(y, dtype=np.float64))
        if X.shape[0] != Y.shape[0]:
            raise ValueError("x and y must have the same number of rows")
        if spec is None:
            spec = EncodingSpec(x_definition="raw", y_definition="raw", n=X.shape[1], m=Y.shape[1])
        if x_codings is None:
            x_codings = [window_coding(row) for row in X]
        if y_codings is None:
            y_codings = [window_coding(row) for row in Y]
        if anchors is None:
            anchors = range(X.shape[0])
        pairs = tuple(
            PatternPair(xr, yr, xc, yc, int(a))
            for xr, yr, xc, yc, a in zip(X, Y, x_codings, y_codings, anchors)
        )
        return cls(pairs, spec, source_id)


def build_pairs(series: MonthlyLoadSeries, spec: EncodingSpec) -> PatternDataset:
    """Slide the (x window, y window) pair over the series, one month at a time.

    A pair exists at every anchor where the n months ending at the anchor and
    the m months starting tau months later both fit, giving
    N = L - n - m - tau + 2 pairs for a series of length L. History mode
    reuses the x window's coding variables for the y-pattern; external mode
    encodes each y window with its own mean and dispersion (both are known
    for historical windows), leaving the unknown target-window coding to be
    supplied at forecast time.
    """
    L = len(series)
    if L < spec.min_series_length:
        raise ValueError(
            f"{series.country_code}: need at least {spec.min_series_length} months "
            f"to build pattern pairs, have {L}"
        )
    demands = series.demand
    pairs = []
    for anchor in range(spec.n - 1, L - spec.tau - spec.m + 1):
        xw = demands[anchor - spec.n + 1 : anchor + 1]
        yw = demands[anchor + spec.tau : anchor + spec.tau + spec.m]
        x, x_coding = encode_x(xw, spec)
        y_coding = x_coding if spec.coding_mode == "history" else window_coding(yw)
        y = encode_y(yw, y_coding, spec)
        degenerate = is_degenerate(spec.x_definition, x_coding) or is_degenerate(
            spec.y_definition, y_coding
        )
        pairs.append(PatternPair(x, y, x_coding, y_coding, anchor, degenerate))
    return PatternDataset(tuple(pairs), spec, series.country_code)


def load_coding_csv(path) -> dict[tuple[str, int], CodingVariables]:
    """Read externally forecasted coding variables.

    Format: header `country,year,mean_mwh,dispersion_mwh`, one row per
    (country, target year). Used to decode forecasts when the coding
    variables are predicted by an outside model instead of taken from the
    input window.
    """
    out: dict[tuple[str, int], CodingVariables] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(c.strip() for c in header) != CODING_CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CODING_CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path} line {lineno}: expected 4 fields, got {len(row)}")
            try:
                key = (row[0].strip(), int(row[1]))
                coding = CodingVariables(float(row[2]), float(row[3]))
            except ValueError as exc:
                raise ValueError(f"{path} line {lineno}: {exc}") from None
            if key in out:
                raise ValueError(f"{path} line {lineno}: duplicate entry for {key}")
            out[key] = coding
    return out
