"""Scikit-learn-style estimator wrappers around the functional core.

These classes follow the sklearn fit/transform/predict conventions
(constructor stores hyperparameters untouched, fitted state gets a trailing
underscore, ``get_params``/``set_params`` come from ``BaseEstimator``), so
the toolkit's transforms and forecaster compose with pipelines and model
-selection utilities from the wider ecosystem.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import forecasting, sarima, series
from .exceptions import DataError
from .month import Month


def _column(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DataError(f"expected a single series, got shape {arr.shape}")
    return arr


class BoxCoxTransformer(TransformerMixin, BaseEstimator):
    """Box-Cox variance stabilization with optional automatic lambda.

    Parameters
    ----------
    lam : float or "auto"
        Transform parameter; "auto" selects it by Guerrero's method on fit.
    variant : str
        "shifted" ((y^l - 1)/l) or "power" (y^l).
    season_length : int
        Block length for the Guerrero criterion.
    """

    def __init__(self, lam="auto", variant=series.BOXCOX_SHIFTED,
                 season_length=12):
        self.lam = lam
        self.variant = variant
        self.season_length = season_length

    def fit(self, X, y=None):
        x = _column(X)
        if self.lam == "auto":
            ts = series.TimeSeries(start=Month(2000, 1), values=x)
            self.lambda_ = series.select_lambda(ts, s=self.season_length)
        else:
            self.lambda_ = float(self.lam)
        return self

    def transform(self, X):
        self._check_fitted()
        return series.boxcox_values(_column(X), self.lambda_, self.variant)

    def inverse_transform(self, X):
        self._check_fitted()
        return series.inv_boxcox_values(_column(X), self.lambda_, self.variant)

    def _check_fitted(self):
        if not hasattr(self, "lambda_"):
            raise NotFittedError("BoxCoxTransformer is not fitted yet")


class Differencer(TransformerMixin, BaseEstimator):
    """Regular and seasonal differencing with exact inversion.

    ``fit`` memorizes the leading observations the transform consumes, so
    ``inverse_transform`` restores the original series exactly.
    """

    def __init__(self, d=1, D=0, s=12):
        self.d = d
        self.D = D
        self.s = s

    def fit(self, X, y=None):
        x = _column(X)
        consumed = self.d + self.D * self.s
        if x.size <= consumed:
            raise DataError(
                f"differencing consumes {consumed} observations but the "
                f"series has only {x.size}"
            )
        self.anchor_ = x[:consumed].copy()
        return self

    def transform(self, X):
        self._check_fitted()
        return series._difference_values(_column(X), self.d, self.D, self.s)

    def inverse_transform(self, X):
        self._check_fitted()
        lags = [self.s] * self.D + [1] * self.d
        return series._integrate_values(_column(X), self.anchor_, lags)

    def _check_fitted(self):
        if not hasattr(self, "anchor_"):
            raise NotFittedError("Differencer is not fitted yet")


class SarimaForecaster(BaseEstimator):
    """Seasonal ARIMA forecaster with the fit/predict surface.

    Parameters
    ----------
    order : tuple
        Non-seasonal (p, d, q).
    seasonal_order : tuple
        Seasonal (P, D, Q, s).
    include_constant : bool or "auto"
        "auto" adds a constant only for undifferenced models.
    lam : None, float, or "auto"
        Box-Cox pretreatment of the series; None fits on the raw scale.
    boxcox_variant : str
        Box-Cox form when ``lam`` is used.
    """

    def __init__(self, order=(1, 1, 1), seasonal_order=(1, 0, 1, 12),
                 include_constant="auto", lam=None,
                 boxcox_variant=series.BOXCOX_SHIFTED):
        self.order = order
        self.seasonal_order = seasonal_order
        self.include_constant = include_constant
        self.lam = lam
        self.boxcox_variant = boxcox_variant

    def _spec(self) -> sarima.SarimaSpec:
        p, d, q = (int(v) for v in self.order)
        P, D, Q, s = (int(v) for v in self.seasonal_order)
        if self.include_constant == "auto":
            constant = (d + D == 0)
        else:
            constant = bool(self.include_constant)
        return sarima.SarimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q, s=s,
                                 include_constant=constant)

    def fit(self, y, start: Optional[Month] = None):
        """Fit to a series (array-like or TimeSeries). Returns self."""
        if isinstance(y, series.TimeSeries):
            ts = y
        else:
            ts = series.TimeSeries(start=start or Month(2000, 1), values=_column(y))

        if self.lam is None:
            self.lambda_ = None
            modeling = ts
        else:
            lam = (series.select_lambda(ts, s=self._spec().s)
                   if self.lam == "auto" else float(self.lam))
            self.lambda_ = lam
            modeling = series.boxcox(ts, lam, self.boxcox_variant)

        self.fit_result_ = sarima.fit(self._spec(), modeling)
        return self

    def predict(self, h: int) -> np.ndarray:
        """Point forecasts for the next ``h`` months, original scale."""
        return self.forecast(h).point

    def forecast(self, h: int, level: float = 0.95,
                 **kwargs) -> forecasting.ForecastResult:
        """Full forecast with interval bounds."""
        self._check_fitted()
        return forecasting.forecast(self.fit_result_, h=h, level=level, **kwargs)

    def score(self, y_true, h: Optional[int] = None) -> float:
        """Negative holdout RMSE (sklearn convention: larger is better)."""
        actual = _column(y_true)
        fc = self.forecast(h if h is not None else actual.size)
        return -forecasting.rmse(fc.point, actual).rmse

    @property
    def aic_(self) -> float:
        self._check_fitted()
        return self.fit_result_.aic

    def _check_fitted(self):
        if not hasattr(self, "fit_result_"):
            raise NotFittedError("SarimaForecaster is not fitted yet")
