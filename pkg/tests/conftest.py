import numpy as np
import pytest

from psfm.series_store import MonthlyLoadSeries


def make_series(demands, country="XX", start_year=2000, start_month=1):
    """Series from a flat demand list, starting at the given calendar month."""
    demands = np.asarray(demands, dtype=np.float64)
    t = np.arange(demands.size) + (start_month - 1)
    return MonthlyLoadSeries(country, start_year + t // 12, t % 12 + 1, demands)


def tiled_series(annual_shape, years, country="XX", start_year=2000):
    """An exactly periodic series: one annual shape repeated."""
    shape = np.asarray(annual_shape, dtype=np.float64)
    assert shape.size == 12
    return make_series(np.tile(shape, years), country=country, start_year=start_year)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
