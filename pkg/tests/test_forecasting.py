import numpy as np
import pytest

import sarimakit as sk
from sarimakit.exceptions import DataError, NumericalError
from sarimakit.forecasting import ForecastResult
from sarimakit.month import Month
from sarimakit.sarima import SarimaParams, SarimaSpec, evaluate
from sarimakit.series import TimeSeries, boxcox


class TestPointForecasts:
    def test_constant_model_forecasts_its_constant(self, rng, make_series):
        x = rng.normal(loc=10.0, size=300)
        spec = SarimaSpec(0, 0, 0, include_constant=True)
        result = sk.fit(spec, make_series(x))
        fc = sk.forecast(result, h=6)
        c = result.params.constant
        assert np.allclose(fc.point, c, atol=1e-10)
        # white-noise forecast variance is sigma^2 at every step
        half = fc.upper - fc.point
        assert np.allclose(half, half[0], rtol=1e-12)
        z = 1.959964
        assert half[0] == pytest.approx(z * np.sqrt(result.params.sigma2),
                                        rel=1e-4)

    def test_ar1_closed_form_decay(self, rng, make_series):
        x = rng.normal(size=200)
        spec = SarimaSpec(p=1, d=0, q=0)
        params = SarimaParams(ar=(0.5,), sigma2=1.0)
        result = evaluate(spec, params, make_series(x))
        fc = sk.forecast(result, h=8)
        expected = 0.5 ** np.arange(1, 9) * x[-1]
        assert np.allclose(fc.point, expected, atol=1e-12)

    def test_months_continue_the_series(self, rng, make_series):
        ts = make_series(rng.normal(size=24), start=Month(2018, 1))
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.2,), sigma2=1.0), ts)
        fc = sk.forecast(result, h=3)
        assert fc.months == (Month(2020, 1), Month(2020, 2), Month(2020, 3))


class TestIntervals:
    def test_width_non_decreasing(self, rng, make_series):
        for spec, params in [
            (SarimaSpec(p=1, d=0, q=0), SarimaParams(ar=(0.6,), sigma2=1.0)),
            (SarimaSpec(p=0, d=0, q=2), SarimaParams(ma=(0.5, 0.2), sigma2=1.0)),
        ]:
            result = evaluate(spec, params, make_series(rng.normal(size=150)))
            fc = sk.forecast(result, h=12)
            width = fc.upper - fc.lower
            assert np.all(np.diff(width) >= -1e-12)

    def test_nested_levels(self, rng, make_series):
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.5,), sigma2=1.0),
                          make_series(rng.normal(size=100)))
        narrow = sk.forecast(result, h=6, level=0.80)
        wide = sk.forecast(result, h=6, level=0.99)
        assert np.all(wide.lower <= narrow.lower)
        assert np.all(wide.upper >= narrow.upper)

    def test_psi_weights_recorded(self, rng, make_series):
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.5,), sigma2=1.0),
                          make_series(rng.normal(size=100)))
        fc = sk.forecast(result, h=5)
        assert np.allclose(fc.psi_weights, 0.5 ** np.arange(5), atol=1e-14)


class TestBackTransform:
    def test_shift_consistency_with_lambda_one(self, rng, make_series):
        # Box-Cox with lambda=1 (shifted form) is y - 1: forecasting the
        # transformed series and back-transforming equals forecasting the
        # shifted series and adding 1
        vals = rng.uniform(50.0, 60.0, size=120)
        spec = SarimaSpec(p=1, d=0, q=0, include_constant=True)

        transformed = boxcox(make_series(vals), 1.0)
        fit_a = sk.fit(spec, transformed)
        fc_a = sk.forecast(fit_a, h=6)

        shifted = make_series(vals - 1.0)
        fit_b = sk.fit(spec, shifted)
        fc_b = sk.forecast(fit_b, h=6)

        assert np.allclose(fc_a.point, fc_b.point + 1.0, atol=1e-6)
        assert np.allclose(fc_a.transformed_point, fc_b.point, atol=1e-6)

    def test_log_scale_roundtrip(self, rng, make_series):
        vals = np.exp(rng.normal(0.0, 0.1, size=100) + 5.0)
        spec = SarimaSpec(p=1, d=0, q=0, include_constant=True)
        modeling = boxcox(make_series(vals), 0.0)
        result = sk.fit(spec, modeling)
        fc = sk.forecast(result, h=4)
        assert np.allclose(fc.point, np.exp(fc.transformed_point), rtol=1e-12)
        assert np.all(fc.lower <= fc.point) and np.all(fc.point <= fc.upper)

    def test_differenced_scale_integration(self, rng, make_series):
        # with d=1 and all coefficients pinned at zero the point forecast is
        # flat at the last observed level
        vals = np.cumsum(rng.normal(size=80)) + 100.0
        spec = SarimaSpec(p=1, d=1, q=0)
        result = evaluate(spec, SarimaParams(ar=(0.0,), sigma2=1.0),
                          make_series(vals))
        fc = sk.forecast(result, h=5)
        assert np.allclose(fc.point, vals[-1], atol=1e-10)

    def test_one_step_forecast_reproduces_residuals(self, rng, make_series):
        spec = SarimaSpec(p=1, d=0, q=1)
        params = SarimaParams(ar=(0.5,), ma=(0.3,), sigma2=1.0)
        x = sk.simulate(sk.SimulationConfig(spec=spec, params=params,
                                            n=120, seed=2)).values
        full = evaluate(spec, params, make_series(x))
        for t in range(full.burn_in + 1, 120):
            prefix = evaluate(spec, params, make_series(x[:t]))
            fc = sk.forecast(prefix, h=1)
            assert x[t] - fc.point[0] == pytest.approx(full.residuals[t],
                                                       abs=1e-8)

    def test_clamping_negative_lower_bounds(self, rng, make_series):
        x = rng.normal(loc=0.5, scale=2.0, size=60)
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.1,), sigma2=4.0), make_series(x))
        clamped = sk.forecast(result, h=4, clamp_negative=True)
        assert np.all(clamped.lower >= 0.0)
        assert clamped.n_clamped > 0
        free = sk.forecast(result, h=4)
        assert np.any(free.lower < 0.0)
        assert free.n_clamped == 0


class TestRmse:
    def test_perfect_forecast(self):
        assert sk.rmse([1.0, 2.0], [1.0, 2.0]).rmse == 0.0

    def test_hand_evaluated(self):
        # differences (3, 4): sqrt(25/2)
        out = sk.rmse([4.0, 6.0], [1.0, 2.0])
        assert out.rmse == pytest.approx(3.5355339, abs=1e-6)
        assert out.n == 2

    def test_symmetry(self, rng):
        a = rng.normal(size=12)
        b = rng.normal(size=12)
        assert sk.rmse(a, b).rmse == pytest.approx(sk.rmse(b, a).rmse, rel=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            sk.rmse([1.0], [1.0, 2.0])

    def test_accepts_forecast_result(self, rng, make_series):
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.5,), sigma2=1.0),
                          make_series(rng.normal(size=50)))
        fc = sk.forecast(result, h=3)
        assert sk.rmse(fc, fc.point).rmse == 0.0


class TestForecastValidation:
    def test_rejects_nonconverged(self, rng, make_series):
        spec = SarimaSpec(p=1, d=0, q=0)
        result = sk.fit(spec, make_series(rng.normal(size=60)))
        broken = sk.FitResult(
            spec=result.spec, params=result.params, std_errors=None,
            z_values=None, p_values=None, log_likelihood=0.0, aic=0.0,
            residuals=result.residuals, converged=False, iterations=0,
            series=result.series, differenced=result.differenced, burn_in=0)
        with pytest.raises(NumericalError):
            sk.forecast(broken, h=2)

    def test_rejects_bad_horizon_and_level(self, rng, make_series):
        result = evaluate(SarimaSpec(p=1, d=0, q=0),
                          SarimaParams(ar=(0.5,), sigma2=1.0),
                          make_series(rng.normal(size=50)))
        with pytest.raises(DataError):
            sk.forecast(result, h=0)
        with pytest.raises(DataError):
            sk.forecast(result, h=3, level=1.2)
