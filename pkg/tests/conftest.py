import numpy as np
import pytest

from sarimakit import Month, TimeSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20200401)


@pytest.fixture
def make_series():
    def _make(values, start=Month(2012, 1)):
        return TimeSeries(start=start, values=np.asarray(values, dtype=float))
    return _make


@pytest.fixture
def white_noise(rng):
    return rng.normal(size=500)
