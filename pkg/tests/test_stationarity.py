import numpy as np
import pytest

import sarimakit as sk
from sarimakit.exceptions import InsufficientDataError
from sarimakit.stationarity import _interpolated_p, default_adf_lag


class TestAdfDecisions:
    def test_random_walk_keeps_unit_root(self):
        retained = 0
        reps = 100
        for seed in range(reps):
            rng = np.random.default_rng(seed)
            x = np.cumsum(rng.normal(size=500))
            if sk.adf_test(x).p_value > 0.05:
                retained += 1
        assert retained >= 0.9 * reps

    def test_white_noise_rejects_unit_root(self):
        rejected = 0
        reps = 100
        for seed in range(reps):
            rng = np.random.default_rng(10_000 + seed)
            x = rng.normal(size=500)
            if sk.adf_test(x).p_value < 0.05:
                rejected += 1
        assert rejected >= 0.9 * reps

    def test_trend_stationary_ramp_rejected(self):
        # deterministic trend plus small noise is stationary under the
        # trend specification
        rejected = 0
        for seed in range(20):
            rng = np.random.default_rng(123 + seed)
            t = np.arange(1.0, 301.0)
            x = t + rng.normal(0.0, 1.0, size=300)
            result = sk.adf_test(x)
            rejected += result.reject_unit_root_at_05
        assert rejected >= 18

    def test_agrees_with_statsmodels_on_clear_cases(self):
        adfuller = pytest.importorskip("statsmodels.tsa.stattools").adfuller
        rng = np.random.default_rng(5)
        wn = rng.normal(size=400)
        rw = np.cumsum(rng.normal(size=400))
        for x, stationary in ((wn, True), (rw, False)):
            mine = sk.adf_test(x)
            theirs = adfuller(x, regression="ct", autolag=None,
                              maxlag=mine.lag_order)
            assert mine.statistic == pytest.approx(theirs[0], abs=1e-6)
            assert (mine.p_value < 0.05) == stationary
            assert (theirs[1] < 0.05) == stationary


class TestAdfContract:
    def test_default_lag_order(self):
        assert default_adf_lag(100) == 4  # floor(99 ** (1/3))
        result = sk.adf_test(np.random.default_rng(0).normal(size=100))
        assert result.lag_order == 4

    def test_statistic_scale_invariance(self, rng):
        x = np.cumsum(rng.normal(size=200))
        a = sk.adf_test(x).statistic
        b = sk.adf_test(x * 1e4).statistic
        assert a == pytest.approx(b, abs=1e-8)

    def test_reject_flag_consistency(self, rng):
        for seed in range(10):
            x = np.random.default_rng(seed).normal(size=120)
            result = sk.adf_test(x)
            assert result.reject_unit_root_at_05 == (result.p_value < 0.05)

    def test_pvalue_clamped_to_table_range(self, rng):
        x = np.random.default_rng(3).normal(size=500)  # very stationary
        result = sk.adf_test(x)
        assert 0.01 <= result.p_value <= 0.99

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            sk.adf_test(np.arange(8.0))

    def test_interpolation_monotone_in_statistic(self):
        grid = np.linspace(-6.0, 1.0, 120)
        ps = [_interpolated_p(s, 100)[0] for s in grid]
        assert all(b >= a for a, b in zip(ps, ps[1:]))
        assert ps[0] == 0.01 and ps[-1] == 0.99

    def test_clamp_flag(self):
        p_low, clamped_low = _interpolated_p(-9.0, 100)
        assert p_low == 0.01 and clamped_low
        p_mid, clamped_mid = _interpolated_p(-3.0, 100)
        assert 0.01 < p_mid < 0.99 and not clamped_mid
