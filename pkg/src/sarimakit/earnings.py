"""Tourism earnings-loss projection from forecast visitor arrivals.

Under the zero-arrivals counterfactual the monthly loss is the revenue the
forecast arrivals would have produced: arrivals x average daily expenditure
x average length of stay, summed over the loss window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError
from .forecasting import ForecastResult
from .month import Month


@dataclass(frozen=True)
class EarningsAssumptions:
    """Expenditure assumptions and the window of assumed zero arrivals.

    ``alos_nights`` accepts a fractional stay length; published figures
    typically round to a whole number of nights, so pass the rounded value
    for headline numbers and the unrounded one for sensitivity runs.
    """

    ade: float
    alos_nights: float
    window_start: Month
    window_end: Month

    def __post_init__(self) -> None:
        if self.ade <= 0.0:
            raise DataError(f"average daily expenditure must be positive, got {self.ade}")
        if self.alos_nights < 1.0:
            raise DataError(f"average length of stay must be >= 1 night, got {self.alos_nights}")
        if self.window_end < self.window_start:
            raise DataError(
                f"loss window is empty: {self.window_start} .. {self.window_end}"
            )

    @property
    def window_months(self) -> list[Month]:
        count = (self.window_end - self.window_start) + 1
        return [self.window_start + i for i in range(count)]


@dataclass(frozen=True)
class EarningsProjection:
    """Per-month and total projected loss over the window."""

    months: tuple[Month, ...]
    arrivals_used: np.ndarray
    monthly_loss: np.ndarray
    total_loss: float


def monthly_loss(arrivals: float, ade: float, alos_nights: float) -> float:
    """Loss for one month: arrivals x ADE x ALoS."""
    return arrivals * ade * alos_nights


def project_loss(forecast_result: ForecastResult,
                 assumptions: EarningsAssumptions) -> EarningsProjection:
    """Project the earnings loss over the assumptions' window.

    The forecast horizon must cover every month of the window.
    """
    months = assumptions.window_months
    horizon_months = forecast_result.months
    index = {month: i for i, month in enumerate(horizon_months)}
    missing = [m for m in months if m not in index]
    if missing:
        raise DataError(
            f"loss window month {missing[0]} outside forecast horizon "
            f"{horizon_months[0]} .. {horizon_months[-1]}"
        )
    arrivals = np.array([forecast_result.point[index[m]] for m in months])
    losses = np.array([
        monthly_loss(a, assumptions.ade, assumptions.alos_nights)
        for a in arrivals
    ])
    return EarningsProjection(
        months=tuple(months),
        arrivals_used=arrivals,
        monthly_loss=losses,
        total_loss=float(losses.sum()),
    )
