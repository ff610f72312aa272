"""h-step forecasts with intervals, back-transformation, and holdout accuracy.

Point forecasts come from the ARMA recursion on the differenced scale with
future errors set to zero. Step-j variance is sigma^2 * sum_{i<j} psi_i^2
with the MA(infinity) weights of the ARMA part, intervals are formed on that
scale, and then the differencing and any Box-Cox transform recorded in the
fit's lineage are undone on the point and both bounds (median back-transform;
a mean bias adjustment is available as an option).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._validation import as_float_vector, check_in_range
from .exceptions import DataError, NumericalError
from .month import Month
from .sarima import FitResult, expand, psi_weights
from .series import (
    BOX_COX,
    BOXCOX_POWER,
    BOXCOX_SHIFTED,
    TransformStep,
    _continue_integration,
    inv_boxcox_values,
)


@dataclass(frozen=True)
class ForecastResult:
    """Forecast path on the original scale with interval bounds.

    ``point``/``lower``/``upper`` are back-transformed to the original
    scale; ``transformed_point`` is the forecast on the modeling scale
    (after undoing differencing, before undoing any Box-Cox step).
    ``n_clamped`` counts bound entries clamped at zero, either by the
    Box-Cox domain boundary or by the non-negativity option.
    """

    horizon: int
    months: tuple[Month, ...]
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    transformed_point: np.ndarray
    psi_weights: np.ndarray
    level: float
    n_clamped: int


@dataclass(frozen=True)
class AccuracyResult:
    """Holdout accuracy: root mean squared error over n comparison points."""

    rmse: float
    n: int


def _arma_point_forecasts(arc: np.ndarray, mac: np.ndarray, constant: float,
                          w: np.ndarray, resid: np.ndarray, h: int) -> np.ndarray:
    n = w.size
    wext = np.concatenate([w, np.zeros(h)])
    eext = np.concatenate([resid, np.zeros(h)])
    for j in range(h):
        t = n + j
        acc = constant
        for i in range(arc.size):
            idx = t - (i + 1)
            if idx >= 0:
                acc += arc[i] * wext[idx]
        for i in range(mac.size):
            idx = t - (i + 1)
            if idx >= 0:
                acc += mac[i] * eext[idx]
        wext[t] = acc
    return wext[n:]


def _inv_boxcox_bound(values: np.ndarray, lam: float, variant: str) -> tuple[np.ndarray, int]:
    """Tolerant Box-Cox inverse for interval bounds: out-of-domain entries
    land on the scale's lower boundary (zero) instead of erroring."""
    values = np.asarray(values, dtype=np.float64)
    if lam == 0.0:
        return np.exp(values), 0
    if variant == BOXCOX_SHIFTED:
        base = lam * values + 1.0
        clamped = base <= 0.0
        out = np.power(np.where(clamped, 0.0, base), 1.0 / lam)
        out[clamped] = 0.0
        return out, int(np.count_nonzero(clamped))
    clamped = values <= 0.0
    out = np.power(np.where(clamped, 1.0, values), 1.0 / lam)
    out[clamped] = 0.0
    return out, int(np.count_nonzero(clamped))


def _bias_adjusted_point(point_m: np.ndarray, var_m: np.ndarray,
                         lam: float, variant: str) -> np.ndarray:
    """Mean (rather than median) back-transform, shifted variant only."""
    if variant != BOXCOX_SHIFTED:
        raise DataError("bias adjustment is defined for the shifted Box-Cox form")
    if lam == 0.0:
        return np.exp(point_m) * (1.0 + var_m / 2.0)
    base = lam * point_m + 1.0
    if np.any(base <= 0.0):
        raise DataError("bias adjustment undefined: lambda*w + 1 <= 0")
    adj = 1.0 + var_m * (1.0 - lam) / (2.0 * base * base)
    return np.power(base, 1.0 / lam) * adj


def forecast(fit_result: FitResult, h: int, level: float = 0.95, *,
             bias_adjust: bool = False,
             clamp_negative: bool = False) -> ForecastResult:
    """Forecast ``h`` months ahead of the fitted series' end.

    ``level`` is the two-sided interval coverage. ``clamp_negative``
    additionally floors the lower bound at zero (for count data).
    """
    if not fit_result.converged:
        raise NumericalError("cannot forecast from a non-converged fit")
    h = int(h)
    if h < 1:
        raise DataError(f"forecast horizon must be >= 1, got {h}")
    check_in_range(level, 0.0, 1.0, "level")

    spec, params = fit_result.spec, fit_result.params
    for step in fit_result.series.transform_log:
        if step.kind != BOX_COX:
            raise DataError(
                "forecast supports a Box-Cox step in the modeling series' "
                "lineage; apply differencing through the model spec instead"
            )

    expansion = expand(spec, params, n_weights=max(2, h))
    w = fit_result.differenced.values
    fc = _arma_point_forecasts(
        expansion.ar_coeffs, expansion.ma_coeffs,
        params.constant if params.constant is not None else 0.0,
        w, fit_result.residuals, h,
    )

    psi = psi_weights(spec, params, h)
    variances = params.sigma2 * np.cumsum(psi * psi)
    z = float(stats.norm.ppf(0.5 * (1.0 + level)))
    half_width = z * np.sqrt(variances)
    lower_d = fc - half_width
    upper_d = fc + half_width

    # undo differencing, anchored on the modeling-scale history
    hist = fit_result.series.values
    if hist.size < spec.d + spec.D * spec.s:
        raise DataError("history too short to anchor the integration")
    point_m = _continue_integration(hist, fc, spec.d, spec.D, spec.s)
    lower_m = _continue_integration(hist, lower_d, spec.d, spec.D, spec.s)
    upper_m = _continue_integration(hist, upper_d, spec.d, spec.D, spec.s)
    transformed_point = point_m.copy()

    # undo Box-Cox steps, most recent first
    point, lower, upper = point_m, lower_m, upper_m
    n_clamped = 0
    for step in reversed(fit_result.series.transform_log):
        if bias_adjust:
            var_m = ((upper - lower) / (2.0 * z)) ** 2
            point = _bias_adjusted_point(point, var_m, step.lam, step.variant)
        else:
            point = inv_boxcox_values(point, step.lam, step.variant)
        lower, c1 = _inv_boxcox_bound(lower, step.lam, step.variant)
        upper, c2 = _inv_boxcox_bound(upper, step.lam, step.variant)
        n_clamped += c1 + c2
        # a decreasing inverse (power variant, negative lambda) swaps bounds
        lower, upper = np.minimum(lower, upper), np.maximum(lower, upper)

    if clamp_negative:
        negative = lower < 0.0
        n_clamped += int(np.count_nonzero(negative))
        lower = np.maximum(lower, 0.0)

    months = tuple(fit_result.series.end + j for j in range(1, h + 1))
    return ForecastResult(
        horizon=h,
        months=months,
        point=point,
        lower=lower,
        upper=upper,
        transformed_point=transformed_point,
        psi_weights=psi,
        level=level,
        n_clamped=n_clamped,
    )


def rmse(forecast_values, actual_values) -> AccuracyResult:
    """Root mean squared error between forecasts and actuals."""
    if isinstance(forecast_values, ForecastResult):
        forecast_values = forecast_values.point
    f = as_float_vector(forecast_values, "forecast")
    a = as_float_vector(actual_values, "actual")
    if f.size != a.size:
        raise DataError(
            f"forecast and actual lengths differ ({f.size} vs {a.size})"
        )
    diff = f - a
    return AccuracyResult(rmse=float(math.sqrt(np.mean(diff * diff))), n=int(f.size))
