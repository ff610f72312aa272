"""Augmented Dickey-Fuller unit-root test (constant + linear trend).

The regression is

    dx_t = a + b*t + rho * x_{t-1} + sum_{j=1..k} g_j * dx_{t-j} + e_t

and the statistic is the t-ratio on ``rho``. P-values are interpolated from
the classic finite-sample Dickey-Fuller table for the trend specification
(row interpolation by sample size, column interpolation by statistic) and
clamped to [0.01, 0.99]; values at the clamp are flagged, not extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import as_float_vector
from .exceptions import InsufficientDataError, SingularityError
from .series import TimeSeries

# Dickey-Fuller critical values, constant + trend specification, by sample
# size (rows) and cumulative probability (columns).
_TABLE_PROBS = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])
_TABLE_SIZES = np.array([25.0, 50.0, 100.0, 250.0, 500.0, 1e5])
_TABLE_CRIT = np.array([
    [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
    [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
    [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
    [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
    [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
    [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
])


@dataclass(frozen=True)
class AdfResult:
    """ADF test outcome.

    Attributes
    ----------
    statistic : float
        Dickey-Fuller t-ratio on the lagged level.
    lag_order : int
        Number of lagged-difference terms included in the regression.
    p_value : float
        Interpolated p-value, clamped to [0.01, 0.99].
    reject_unit_root_at_05 : bool
        True when ``p_value < 0.05``.
    p_value_clamped : bool
        True when the statistic fell outside the table range and the
        p-value sits at a clamp boundary.
    """

    statistic: float
    lag_order: int
    p_value: float
    reject_unit_root_at_05: bool
    p_value_clamped: bool


def default_adf_lag(n: int) -> int:
    """Default lag order, floor((N-1)^(1/3))."""
    return int(np.floor((n - 1) ** (1.0 / 3.0)))


def _interpolated_p(statistic: float, n: int) -> tuple[float, bool]:
    # row interpolation by sample size, then column interpolation by statistic
    size = float(min(max(n, _TABLE_SIZES[0]), _TABLE_SIZES[-1]))
    crit = np.array([
        np.interp(size, _TABLE_SIZES, _TABLE_CRIT[:, j])
        for j in range(_TABLE_PROBS.size)
    ])
    clamped = statistic < crit[0] or statistic > crit[-1]
    p = float(np.interp(statistic, crit, _TABLE_PROBS))
    return p, bool(clamped)


def adf_test(ts, lag_order: Optional[int] = None) -> AdfResult:
    """Run the ADF regression with constant and linear trend.

    ``lag_order`` defaults to floor((N-1)^(1/3)). Needs at least
    ``10 + lag_order`` observations.
    """
    x = ts.values if isinstance(ts, TimeSeries) else as_float_vector(ts, "series")
    n = x.size
    k = default_adf_lag(n) if lag_order is None else int(lag_order)
    if k < 0:
        raise InsufficientDataError(f"lag order must be non-negative, got {k}")
    if n < 10 + k:
        raise InsufficientDataError(
            f"ADF with lag order {k} needs at least {10 + k} observations, got {n}"
        )

    dx = np.diff(x)
    rows = np.arange(k, dx.size)
    y = dx[rows]
    columns = [x[rows], np.ones(rows.size), rows.astype(np.float64)]
    for j in range(1, k + 1):
        columns.append(dx[rows - j])
    design = np.column_stack(columns)

    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise SingularityError("ADF regression design matrix is singular")
    resid = y - design @ coef
    dof = rows.size - design.shape[1]
    if dof <= 0:
        raise InsufficientDataError("ADF regression has no residual degrees of freedom")
    s2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.inv(design.T @ design)
    se_rho = float(np.sqrt(s2 * xtx_inv[0, 0]))
    if se_rho <= 0.0 or not np.isfinite(se_rho):
        raise SingularityError("ADF statistic undefined: zero standard error")
    statistic = float(coef[0] / se_rho)

    p_value, clamped = _interpolated_p(statistic, n - 1)
    return AdfResult(
        statistic=statistic,
        lag_order=k,
        p_value=p_value,
        reject_unit_root_at_05=p_value < 0.05,
        p_value_clamped=clamped,
    )
