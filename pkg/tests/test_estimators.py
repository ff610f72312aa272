import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import sarimakit as sk
from sarimakit.estimators import BoxCoxTransformer, Differencer, SarimaForecaster


@pytest.fixture
def seasonal_values(rng):
    t = np.arange(144)
    return np.exp(0.3 * np.sin(2 * np.pi * t / 12)
                  + rng.normal(0, 0.05, size=144)) * 1000.0


class TestBoxCoxTransformer:
    def test_roundtrip(self, seasonal_values):
        tr = BoxCoxTransformer(lam=0.4)
        tr.fit(seasonal_values)
        back = tr.inverse_transform(tr.transform(seasonal_values))
        assert np.allclose(back, seasonal_values, rtol=1e-10)

    def test_auto_lambda_matches_functional_api(self, seasonal_values):
        tr = BoxCoxTransformer(lam="auto").fit(seasonal_values)
        ts = sk.TimeSeries(sk.Month(2000, 1), seasonal_values)
        assert tr.lambda_ == pytest.approx(sk.select_lambda(ts), abs=1e-12)

    def test_column_vector_input(self, seasonal_values):
        tr = BoxCoxTransformer(lam=0.0).fit(seasonal_values.reshape(-1, 1))
        out = tr.transform(seasonal_values.reshape(-1, 1))
        assert np.allclose(out, np.log(seasonal_values))

    def test_get_params_roundtrip(self):
        tr = BoxCoxTransformer(lam=0.3, variant="power", season_length=4)
        params = tr.get_params()
        assert params == {"lam": 0.3, "variant": "power", "season_length": 4}
        cloned = clone(tr)
        assert cloned.get_params() == params

    def test_not_fitted(self, seasonal_values):
        with pytest.raises(NotFittedError):
            BoxCoxTransformer(lam=0.3).transform(seasonal_values)


class TestDifferencer:
    def test_matches_functional_difference(self, rng):
        x = rng.normal(size=60)
        tr = Differencer(d=1, D=1, s=12).fit(x)
        ts = sk.TimeSeries(sk.Month(2000, 1), x)
        expected = sk.difference(ts, d=1, D=1, s=12).values
        assert np.array_equal(tr.transform(x), expected)

    def test_exact_inverse(self, rng):
        x = rng.normal(size=60)
        tr = Differencer(d=2, D=1, s=4).fit(x)
        back = tr.inverse_transform(tr.transform(x))
        assert np.allclose(back, x, rtol=1e-12)

    def test_too_short(self):
        with pytest.raises(sk.DataError):
            Differencer(d=1, D=1, s=12).fit(np.arange(10.0))


class TestSarimaForecaster:
    def test_fit_predict_matches_functional_pipeline(self, rng):
        spec = sk.SarimaSpec(p=1, d=0, q=0)
        sim = sk.simulate(sk.SimulationConfig(
            spec=spec, params=sk.SarimaParams(ar=(0.6,)), n=200, seed=4))
        est = SarimaForecaster(order=(1, 0, 0), seasonal_order=(0, 0, 0, 12),
                               include_constant=False)
        est.fit(sim)
        functional = sk.fit(spec, sim)
        assert est.fit_result_.params.ar[0] == pytest.approx(
            functional.params.ar[0], abs=1e-10)
        assert np.allclose(est.predict(6), sk.forecast(functional, 6).point)
        assert est.aic_ == pytest.approx(functional.aic, abs=1e-10)

    def test_auto_constant_follows_differencing(self):
        spec_undiff = SarimaForecaster(order=(0, 0, 1),
                                       seasonal_order=(0, 0, 0, 12))._spec()
        assert spec_undiff.include_constant is True
        spec_diff = SarimaForecaster(order=(0, 1, 1),
                                     seasonal_order=(0, 0, 0, 12))._spec()
        assert spec_diff.include_constant is False

    def test_boxcox_pretreatment(self, seasonal_values):
        est = SarimaForecaster(order=(1, 0, 0), seasonal_order=(0, 0, 0, 12),
                               lam=0.0, include_constant=True)
        est.fit(seasonal_values)
        assert est.lambda_ == 0.0
        points = est.predict(3)
        assert np.all(points > 0)

    def test_score_is_negative_rmse(self, rng):
        spec = sk.SarimaSpec(p=1, d=0, q=0)
        sim = sk.simulate(sk.SimulationConfig(
            spec=spec, params=sk.SarimaParams(ar=(0.5,)), n=120, seed=9))
        train, test = sk.split_at(sim, sim.end - 12)
        est = SarimaForecaster(order=(1, 0, 0), seasonal_order=(0, 0, 0, 12),
                               include_constant=False).fit(train)
        fc = est.forecast(len(test))
        assert est.score(test.values) == pytest.approx(
            -sk.rmse(fc.point, test.values).rmse, rel=1e-12)

    def test_clone_and_get_params(self):
        est = SarimaForecaster(order=(2, 1, 0), seasonal_order=(1, 0, 1, 12),
                               lam="auto")
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SarimaForecaster().predict(3)
