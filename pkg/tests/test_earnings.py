import numpy as np
import pytest

import sarimakit as sk
from sarimakit.earnings import EarningsAssumptions, monthly_loss, project_loss
from sarimakit.exceptions import DataError
from sarimakit.forecasting import ForecastResult
from sarimakit.month import Month


def make_forecast(arrivals, start=Month(2020, 1)):
    arrivals = np.asarray(arrivals, dtype=float)
    h = arrivals.size
    return ForecastResult(
        horizon=h,
        months=tuple(start + i for i in range(h)),
        point=arrivals,
        lower=arrivals * 0.9,
        upper=arrivals * 1.1,
        transformed_point=arrivals.copy(),
        psi_weights=np.ones(h),
        level=0.95,
        n_clamped=0,
    )


def assumptions(start=Month(2020, 4), end=Month(2020, 7), ade=8423.98, alos=7.0):
    return EarningsAssumptions(ade=ade, alos_nights=alos,
                               window_start=start, window_end=end)


class TestMonthlyLoss:
    def test_headline_arithmetic_is_exact(self):
        assert monthly_loss(500_000, 8423.98, 7) == 29_483_930_000.0

    def test_zero_arrivals(self):
        assert monthly_loss(0.0, 8423.98, 7) == 0.0


class TestProjectLoss:
    def test_monthly_products_and_total(self):
        fc = make_forecast([500_000.0] * 12)
        projection = project_loss(fc, assumptions())
        assert np.all(projection.monthly_loss == 29_483_930_000.0)
        assert len(projection.months) == 4
        assert projection.total_loss == pytest.approx(
            projection.monthly_loss.sum(), rel=1e-6)

    def test_linearity_in_ade(self, rng):
        fc = make_forecast(rng.uniform(1e5, 5e5, size=12))
        base = project_loss(fc, assumptions(ade=8423.98))
        doubled = project_loss(fc, assumptions(ade=2 * 8423.98))
        assert np.array_equal(doubled.monthly_loss, 2.0 * base.monthly_loss)
        assert doubled.total_loss == pytest.approx(2.0 * base.total_loss,
                                                   rel=1e-12)

    def test_window_additivity(self, rng):
        fc = make_forecast(rng.uniform(1e5, 5e5, size=12))
        whole = project_loss(fc, assumptions(Month(2020, 4), Month(2020, 9)))
        left = project_loss(fc, assumptions(Month(2020, 4), Month(2020, 6)))
        right = project_loss(fc, assumptions(Month(2020, 7), Month(2020, 9)))
        assert whole.total_loss == pytest.approx(
            left.total_loss + right.total_loss, rel=1e-12)

    def test_widening_never_decreases(self, rng):
        fc = make_forecast(rng.uniform(1e5, 5e5, size=12))
        narrow = project_loss(fc, assumptions(Month(2020, 4), Month(2020, 6)))
        wide = project_loss(fc, assumptions(Month(2020, 4), Month(2020, 8)))
        assert wide.total_loss >= narrow.total_loss

    def test_unrounded_alos_option(self):
        fc = make_forecast([100_000.0] * 12)
        rounded = project_loss(fc, assumptions(alos=7.0))
        exact = project_loss(fc, assumptions(alos=7.11))
        assert exact.total_loss == pytest.approx(
            rounded.total_loss * 7.11 / 7.0, rel=1e-12)

    def test_window_outside_horizon(self):
        fc = make_forecast([1.0] * 6)  # 2020-01 .. 2020-06
        with pytest.raises(DataError):
            project_loss(fc, assumptions(Month(2020, 5), Month(2020, 8)))

    def test_assumption_validation(self):
        with pytest.raises(DataError):
            EarningsAssumptions(ade=-1.0, alos_nights=7,
                                window_start=Month(2020, 4),
                                window_end=Month(2020, 7))
        with pytest.raises(DataError):
            EarningsAssumptions(ade=100.0, alos_nights=0.5,
                                window_start=Month(2020, 4),
                                window_end=Month(2020, 7))
        with pytest.raises(DataError):
            EarningsAssumptions(ade=100.0, alos_nights=7,
                                window_start=Month(2020, 7),
                                window_end=Month(2020, 4))
