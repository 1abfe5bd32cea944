import numpy as np
import pytest

from psfm.series_store import (
    MonthlyLoadSeries,
    SeriesCollection,
    load_csv,
    split_train_test,
    validate_csv,
    write_csv,
)

from conftest import make_series


def write_rows(path, rows, header="country,year,month,demand_mwh"):
    lines = [header] + [",".join(str(c) for c in r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoadCsv:
    def test_minimal_two_row_file(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, 40000), ("DE", 2010, 2, 38000)])
        col = load_csv(path)
        assert len(col) == 1
        s = col.get("DE")
        assert len(s) == 2
        assert s.demand.tolist() == [40000.0, 38000.0]

    def test_gap_is_named(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, 40000), ("DE", 2010, 3, 39000)])
        with pytest.raises(ValueError, match="DE missing 2010-02"):
            load_csv(path)

    def test_negative_demand_rejected(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, -5)])
        with pytest.raises(ValueError, match="non-positive demand"):
            load_csv(path)

    def test_parse_failure_names_line(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, 40000), ("DE", 2010, "feb", 38000)])
        with pytest.raises(ValueError, match="line 3"):
            load_csv(path)

    def test_duplicate_rejected(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, 40000), ("DE", 2010, 1, 38000)])
        with pytest.raises(ValueError, match="duplicate"):
            load_csv(path)

    def test_unsorted_rows_are_sorted(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 2, 38000), ("DE", 2010, 1, 40000)])
        s = load_csv(path).get("DE")
        assert s.months.tolist() == [1, 2]
        assert s.demand.tolist() == [40000.0, 38000.0]

    def test_bad_header(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, 1, 1.0)], header="a,b,c,d")
        with pytest.raises(ValueError, match="header"):
            load_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ValueError, match="empty file"):
            load_csv(path)

    def test_round_trip_bit_exact(self, tmp_path, rng):
        # awkward binary floats must survive write -> load unchanged
        demands = rng.uniform(1.0, 1e6, size=36)
        demands[0] = 0.1 + 0.2
        col = SeriesCollection(
            (make_series(demands, country="AA"), make_series(demands[:24] * 1.7, country="BB"))
        )
        path = tmp_path / "out.csv"
        write_csv(col, path)
        back = load_csv(path)
        assert back.codes == col.codes
        for code in col.codes:
            orig, re = col.get(code), back.get(code)
            assert orig.demand.tolist() == re.demand.tolist()
            assert orig.years.tolist() == re.years.tolist()
            assert orig.months.tolist() == re.months.tolist()


class TestValidateCsv:
    def test_collects_all_problems(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(
            path,
            [
                ("DE", 2010, 1, 40000),
                ("DE", 2010, 2, 38000),
                ("FR", 2010, 1, 50000),
                ("FR", 2010, 3, 51000),
                ("IT", 2010, 1, -3),
            ],
        )
        result = validate_csv(path)
        assert not result.ok
        by_code = {s.country_code: s for s in result.summaries}
        assert by_code["DE"].ok
        assert any("FR missing 2010-02" in p for p in by_code["FR"].problems)
        assert not by_code["IT"].ok

    def test_valid_corpus_ok(self, tmp_path):
        path = tmp_path / "c.csv"
        write_rows(path, [("DE", 2010, m, 1000 + m) for m in range(1, 13)])
        assert validate_csv(path).ok


class TestSplit:
    def test_two_year_split(self):
        s = make_series(np.arange(1, 25) * 100.0, start_year=2012)
        train, test = split_train_test(s, 2013)
        assert len(train) == 12 and len(test) == 12
        assert train.years.tolist() == [2012] * 12
        assert test.years.tolist() == [2013] * 12

    def test_incomplete_test_year(self):
        s = make_series(np.arange(1, 19) * 100.0, start_year=2012)  # ends 2013-06
        with pytest.raises(ValueError, match="not fully covered"):
            split_train_test(s, 2013)

    def test_long_series_lengths(self):
        # 288 months covering 1991..2014 -> 276 train, 12 test
        s = make_series(np.linspace(1000, 2000, 288), start_year=1991)
        train, test = split_train_test(s, 2014)
        assert len(train) == 276
        assert len(test) == 12

    def test_min_history_enforced(self):
        s = make_series(np.arange(1, 25) * 100.0, start_year=2012)
        with pytest.raises(ValueError, match="at least 23"):
            split_train_test(s, 2013, min_train_months=23)

    def test_concatenation_reproduces_window(self, rng):
        demands = rng.uniform(100.0, 200.0, size=60)
        s = make_series(demands, start_year=2000)
        train, test = split_train_test(s, 2003)
        joined = np.concatenate([train.demand, test.demand])
        end = s.index_of(2003, 12) + 1
        assert joined.tolist() == s.demand[:end].tolist()


class TestSeriesInvariants:
    def test_month_range_checked(self):
        with pytest.raises(ValueError, match="month outside"):
            MonthlyLoadSeries("XX", np.array([2000]), np.array([13]), np.array([1.0]))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            make_series([100.0, np.nan, 100.0])

    def test_arrays_read_only(self):
        s = make_series([1.0, 2.0])
        with pytest.raises(ValueError):
            s.demand[0] = 5.0

    def test_index_of(self):
        s = make_series(np.arange(1, 25) * 1.0, start_year=2010)
        assert s.index_of(2010, 1) == 0
        assert s.index_of(2011, 12) == 23
        assert s.index_of(2012, 1) == -1

    def test_collection_rejects_duplicate_codes(self):
        a = make_series([1.0], country="AA")
        with pytest.raises(ValueError, match="duplicate country code"):
            SeriesCollection((a, make_series([2.0], country="AA")))
