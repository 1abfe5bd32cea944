"""Ingest, validate, index, and split monthly electricity demand series."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator

import numpy as np

CSV_HEADER = ("country", "year", "month", "demand_mwh")


def _ordinal(year: int, month: int) -> int:
    """Absolute month number, gap-free across year boundaries."""
    return year * 12 + (month - 1)


@dataclass(frozen=True)
class MonthlyLoadSeries:
    """Monthly demand history for one country.

    Observations are calendar-contiguous: consecutive entries are exactly one
    month apart, in increasing order. Demands are finite, positive MWh values.
    """

    country_code: str
    years: np.ndarray
    months: np.ndarray
    demand: np.ndarray

    def __post_init__(self) -> None:
        years = np.asarray(self.years, dtype=np.int64)
        months = np.asarray(self.months, dtype=np.int64)
        demand = np.asarray(self.demand, dtype=np.float64)
        code = self.country_code
        if not code:
            raise ValueError("country code must be nonempty")
        if years.ndim != 1 or years.shape != months.shape or years.shape != demand.shape:
            raise ValueError(f"{code}: years, months and demand must be 1-D arrays of equal length")
        if years.size == 0:
            raise ValueError(f"{code}: empty series")
        if np.any((months < 1) | (months > 12)):
            raise ValueError(f"{code}: month outside 1..12")
        ords = years * 12 + (months - 1)
        steps = np.diff(ords)
        if np.any(steps == 0):
            i = int(np.argmax(steps == 0)) + 1
            raise ValueError(f"{code}: duplicate observation {years[i]:04d}-{months[i]:02d}")
        if np.any(steps < 0):
            raise ValueError(f"{code}: observations not in calendar order")
        if np.any(steps > 1):
            i = int(np.argmax(steps > 1))
            gy, gm0 = divmod(int(ords[i]) + 1, 12)
            raise ValueError(f"{code} missing {gy:04d}-{gm0 + 1:02d}")
        if not np.all(np.isfinite(demand)):
            raise ValueError(f"{code}: non-finite demand value")
        if np.any(demand <= 0):
            i = int(np.argmax(demand <= 0))
            raise ValueError(
                f"{code}: non-positive demand {demand[i]!r} at {years[i]:04d}-{months[i]:02d}"
            )
        for name, arr in (("years", years), ("months", months), ("demand", demand)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_observations(cls, country_code: str, observations) -> "MonthlyLoadSeries":
        """Build a series from an iterable of (year, month, demand) rows."""
        rows = list(observations)
        if not rows:
            raise ValueError(f"{country_code}: empty series")
        years, months, demand = zip(*rows)
        return cls(country_code, np.array(years), np.array(months), np.array(demand))

    def __len__(self) -> int:
        return int(self.demand.size)

    @property
    def start(self) -> tuple[int, int]:
        return int(self.years[0]), int(self.months[0])

    @property
    def end(self) -> tuple[int, int]:
        return int(self.years[-1]), int(self.months[-1])

    def observations(self) -> Iterator[tuple[int, int, float]]:
        for y, m, d in zip(self.years, self.months, self.demand):
            yield int(y), int(m), float(d)

    def index_of(self, year: int, month: int) -> int:
        """Position of (year, month) in the series, or -1 when absent."""
        off = _ordinal(year, month) - _ordinal(*self.start)
        return off if 0 <= off < len(self) else -1

    def slice(self, start: int, stop: int) -> "MonthlyLoadSeries":
        """Contiguous sub-series over positions [start, stop)."""
        if not (0 <= start < stop <= len(self)):
            raise ValueError(f"{self.country_code}: invalid slice [{start}, {stop})")
        return MonthlyLoadSeries(
            self.country_code, self.years[start:stop], self.months[start:stop], self.demand[start:stop]
        )


@dataclass(frozen=True)
class SeriesCollection:
    """A set of series with unique country codes, in load order."""

    series: tuple[MonthlyLoadSeries, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "series", tuple(self.series))
        seen: dict[str, MonthlyLoadSeries] = {}
        for s in self.series:
            if s.country_code in seen:
                raise ValueError(f"duplicate country code {s.country_code!r}")
            seen[s.country_code] = s
        object.__setattr__(self, "_by_code", seen)

    def __iter__(self) -> Iterator[MonthlyLoadSeries]:
        return iter(self.series)

    def __len__(self) -> int:
        return len(self.series)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(s.country_code for s in self.series)

    def get(self, country_code: str) -> MonthlyLoadSeries:
        by_code: dict[str, MonthlyLoadSeries] = getattr(self, "_by_code")
        if country_code not in by_code:
            raise KeyError(f"unknown country code {country_code!r}")
        return by_code[country_code]


def _scan_csv(path) -> tuple[dict[str, list[tuple[int, int, float, int]]], list[str]]:
    """Parse and group CSV rows by country; collect problems instead of raising."""
    issues: list[str] = []
    groups: dict[str, list[tuple[int, int, float, int]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            issues.append(f"{path}: empty file")
            return groups, issues
        if tuple(c.strip() for c in header) != CSV_HEADER:
            issues.append(f"{path} line 1: expected header {','.join(CSV_HEADER)}")
            return groups, issues
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                issues.append(f"{path} line {lineno}: expected 4 fields, got {len(row)}")
                continue
            country = row[0].strip()
            try:
                year, month, demand = int(row[1]), int(row[2]), float(row[3])
            except ValueError:
                issues.append(f"{path} line {lineno}: cannot parse row {','.join(row)!r}")
                continue
            if not country:
                issues.append(f"{path} line {lineno}: empty country code")
                continue
            groups.setdefault(country, []).append((year, month, demand, lineno))
    return groups, issues


def _build_series(country: str, rows: list[tuple[int, int, float, int]], issues: list[str]):
    rows = sorted(rows, key=lambda r: (r[0], r[1]))
    for prev, cur in zip(rows, rows[1:]):
        if (prev[0], prev[1]) == (cur[0], cur[1]):
            issues.append(
                f"{country}: duplicate row for {cur[0]:04d}-{cur[1]:02d} (lines {prev[3]} and {cur[3]})"
            )
            return None
    try:
        return MonthlyLoadSeries.from_observations(country, [(y, m, d) for y, m, d, _ in rows])
    except ValueError as exc:
        issues.append(str(exc))
        return None


def load_csv(path) -> SeriesCollection:
    """Load a demand corpus from CSV with header `country,year,month,demand_mwh`.

    Rows may arrive unsorted; they are sorted per country. Any parse failure,
    duplicate (country, year, month), calendar gap, or invalid demand raises
    ValueError naming the offending line or month.
    """
    groups, issues = _scan_csv(path)
    if issues:
        raise ValueError(issues[0])
    if not groups:
        raise ValueError(f"{path}: no data rows")
    series = []
    for country, rows in groups.items():
        built = _build_series(country, rows, issues)
        if issues:
            raise ValueError(issues[0])
        series.append(built)
    return SeriesCollection(tuple(series))


def write_csv(collection: SeriesCollection, path) -> None:
    """Write a collection in the load_csv format, round-tripping demands bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for s in collection:
            for y, m, d in s.observations():
                writer.writerow([s.country_code, y, m, repr(d)])


@dataclass(frozen=True)
class SeriesSummary:
    country_code: str
    n_months: int
    start: tuple[int, int] | None
    end: tuple[int, int] | None
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass(frozen=True)
class CorpusValidation:
    """Outcome of a lenient corpus scan: every problem, not just the first."""

    summaries: tuple[SeriesSummary, ...]
    parse_issues: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.parse_issues and all(s.ok for s in self.summaries)


def validate_csv(path) -> CorpusValidation:
    """Scan a corpus CSV and report all per-country problems without aborting."""
    groups, issues = _scan_csv(path)
    if not groups and not issues:
        issues.append(f"{path}: no data rows")
    summaries = []
    for country, rows in groups.items():
        problems: list[str] = []
        built = _build_series(country, rows, problems)
        if built is not None:
            summaries.append(SeriesSummary(country, len(built), built.start, built.end, ()))
        else:
            srt = sorted(rows, key=lambda r: (r[0], r[1]))
            summaries.append(
                SeriesSummary(
                    country, len(rows), (srt[0][0], srt[0][1]), (srt[-1][0], srt[-1][1]), tuple(problems)
                )
            )
    return CorpusValidation(tuple(summaries), tuple(issues))


def split_train_test(
    series: MonthlyLoadSeries, test_year: int, min_train_months: int = 1
) -> tuple[MonthlyLoadSeries, MonthlyLoadSeries]:
    """Split into (all months before January of test_year, the 12 months of test_year).

    Callers that will build pattern windows pass the geometry-derived minimum
    via min_train_months; the split rejects shorter histories with the
    required figure in the message.
    """
    i0 = series.index_of(test_year, 1)
    if i0 < 0 or i0 + 12 > len(series):
        raise ValueError(f"{series.country_code}: test year {test_year} not fully covered by the series")
    if i0 < min_train_months:
        raise ValueError(
            f"{series.country_code}: need at least {min_train_months} months before {test_year}, have {i0}"
        )
    return series.slice(0, i0), series.slice(i0, i0 + 12)
