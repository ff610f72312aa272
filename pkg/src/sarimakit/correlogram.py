"""Sample autocorrelation and partial autocorrelation with white-noise bounds.

The ACF estimator divides the lag-k cross products by the full-sample sum of
squared deviations (mean taken over all N observations), so every value lies
in [-1, 1]. The PACF is the Durbin-Levinson recursion seeded with the sample
ACF, equivalent to solving the Yule-Walker system order by order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._validation import as_float_vector, check_in_range, check_min_length
from .exceptions import ConstantSeriesError, DataError, SingularityError
from .series import TimeSeries

_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class CorrelogramResult:
    """Correlations per lag with a two-sided white-noise significance bound.

    Attributes
    ----------
    lags : np.ndarray
        Lag indices 1..K.
    values : np.ndarray
        Correlation at each lag, in [-1, 1].
    bound : float
        Two-sided white-noise bound, ``z_{1-alpha/2} / sqrt(N)``.
    kind : str
        ``"acf"`` or ``"pacf"``.
    n : int
        Sample size the correlogram was computed from.
    """

    lags: np.ndarray
    values: np.ndarray
    bound: float
    kind: str
    n: int

    def within_bounds(self) -> np.ndarray:
        """Boolean mask of lags whose correlation stays inside the bound."""
        return np.abs(self.values) <= self.bound


def _extract(values) -> np.ndarray:
    if isinstance(values, TimeSeries):
        return values.values
    return as_float_vector(values, "series")


def sample_acf(values, max_lag: int) -> np.ndarray:
    """Sample autocorrelations r_0..r_K as an array of length K+1 (r_0 = 1)."""
    x = _extract(values)
    check_min_length(x, 2, "sample ACF")
    max_lag = int(max_lag)
    if not 0 <= max_lag <= x.size - 1:
        raise DataError(
            f"max_lag must be in 0..{x.size - 1} for n={x.size}, got {max_lag}"
        )
    dev = x - x.mean()
    denom = float(np.dot(dev, dev))
    if denom <= 0.0:
        raise ConstantSeriesError("ACF undefined for a constant series")
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for k in range(1, max_lag + 1):
        r[k] = float(np.dot(dev[:-k], dev[k:])) / denom
    return r


def sample_pacf(values, max_lag: int) -> np.ndarray:
    """Sample partial autocorrelations phi_11..phi_KK via Durbin-Levinson."""
    x = _extract(values)
    max_lag = int(max_lag)
    if max_lag < 1:
        raise DataError(f"PACF needs max_lag >= 1, got {max_lag}")
    r = sample_acf(x, max_lag)
    out = np.empty(max_lag)
    out[0] = r[1]
    phi = np.array([r[1]])  # phi_{k,1..k} for the current order k
    for k in range(2, max_lag + 1):
        denom = 1.0 - float(np.dot(phi, r[1:k]))
        if abs(denom) < _SINGULAR_TOL:
            raise SingularityError(
                f"Durbin-Levinson denominator ~ 0 at lag {k} (|{denom:.3e}|)"
            )
        phi_kk = (r[k] - float(np.dot(phi, r[k - 1:0:-1]))) / denom
        phi = np.append(phi - phi_kk * phi[::-1], phi_kk)
        out[k - 1] = phi_kk
    return out


def white_noise_bound(n: int, alpha: float = 0.05) -> float:
    """Two-sided significance bound for correlations of white noise."""
    n = int(n)
    if n < 2:
        raise DataError(f"sample size must be >= 2, got {n}")
    check_in_range(alpha, 0.0, 1.0, "alpha")
    return float(stats.norm.ppf(1.0 - alpha / 2.0) / np.sqrt(n))


def acf(ts, max_lag: int, alpha: float = 0.05) -> CorrelogramResult:
    """Sample ACF at lags 1..max_lag with its white-noise bound."""
    x = _extract(ts)
    r = sample_acf(x, max_lag)
    return CorrelogramResult(
        lags=np.arange(1, max_lag + 1),
        values=r[1:],
        bound=white_noise_bound(x.size, alpha),
        kind="acf",
        n=int(x.size),
    )


def pacf(ts, max_lag: int, alpha: float = 0.05) -> CorrelogramResult:
    """Sample PACF at lags 1..max_lag with its white-noise bound."""
    x = _extract(ts)
    values = sample_pacf(x, max_lag)
    return CorrelogramResult(
        lags=np.arange(1, max_lag + 1),
        values=values,
        bound=white_noise_bound(x.size, alpha),
        kind="pacf",
        n=int(x.size),
    )


def default_max_lag(n: int) -> int:
    """Correlogram lag budget used by the CLI: min(10*log10(N), N-1)."""
    n = int(n)
    if n < 2:
        raise DataError(f"sample size must be >= 2, got {n}")
    return max(1, min(int(10.0 * np.log10(n)), n - 1))
