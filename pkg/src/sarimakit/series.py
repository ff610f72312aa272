"""Monthly time-series value type and its reversible transforms.

``TimeSeries`` couples the observations with a start month and a transform
log so every derived series knows exactly how it was produced and can be
mapped back to the original scale. Differencing, Box-Cox transforms, and
date-based splitting all live here; estimation and forecasting build on top.

Differencing applies the seasonal operator first, then the regular one
(the operators commute, but fixing the order keeps transform logs and their
replays deterministic).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from ._validation import as_float_vector, check_min_length, check_positive_values
from .exceptions import DataError, InsufficientDataError, TransformDomainError
from .month import Month

REGULAR_DIFFERENCE = "regular-difference"
SEASONAL_DIFFERENCE = "seasonal-difference"
BOX_COX = "box-cox"

BOXCOX_SHIFTED = "shifted"
BOXCOX_POWER = "power"


@dataclass(frozen=True)
class TransformStep:
    """One recorded transform: a differencing pass or a Box-Cox transform.

    Attributes
    ----------
    kind : str
        ``"regular-difference"``, ``"seasonal-difference"``, or ``"box-cox"``.
    order : int
        Differencing order (d or D). Unused for Box-Cox.
    period : int
        Season length s for seasonal differencing. Unused otherwise.
    lam : float
        Box-Cox parameter. Unused for differencing.
    variant : str
        Box-Cox form, ``"shifted"`` ((y^l - 1)/l) or ``"power"`` (y^l).
    """

    kind: str
    order: int = 0
    period: int = 0
    lam: float = 0.0
    variant: str = BOXCOX_SHIFTED

    def __post_init__(self) -> None:
        if self.kind == REGULAR_DIFFERENCE:
            if self.order < 1:
                raise DataError("regular difference order must be >= 1")
        elif self.kind == SEASONAL_DIFFERENCE:
            if self.order < 1:
                raise DataError("seasonal difference order must be >= 1")
            if self.period < 2:
                raise DataError("seasonal period must be >= 2")
        elif self.kind == BOX_COX:
            if not np.isfinite(self.lam):
                raise DataError("Box-Cox lambda must be finite")
            if self.variant not in (BOXCOX_SHIFTED, BOXCOX_POWER):
                raise DataError(f"unknown Box-Cox variant {self.variant!r}")
        else:
            raise DataError(f"unknown transform kind {self.kind!r}")

    @classmethod
    def regular_difference(cls, order: int) -> "TransformStep":
        return cls(kind=REGULAR_DIFFERENCE, order=int(order))

    @classmethod
    def seasonal_difference(cls, order: int, period: int) -> "TransformStep":
        return cls(kind=SEASONAL_DIFFERENCE, order=int(order), period=int(period))

    @classmethod
    def box_cox(cls, lam: float, variant: str = BOXCOX_SHIFTED) -> "TransformStep":
        return cls(kind=BOX_COX, lam=float(lam), variant=variant)

    @property
    def consumed(self) -> int:
        """Leading observations consumed when the step is applied."""
        if self.kind == REGULAR_DIFFERENCE:
            return self.order
        if self.kind == SEASONAL_DIFFERENCE:
            return self.order * self.period
        return 0


@dataclass(frozen=True)
class TimeSeries:
    """Equally spaced monthly observations with transform lineage.

    ``values`` are stored as an immutable float64 array. ``transform_log``
    records the steps that produced this series from ``origin`` (the raw
    root series); replaying the log on the origin reproduces ``values``
    bit for bit. Raw visitor-count data must be strictly positive, which
    is enforced at ingestion and by the Box-Cox transform, not here: a
    TimeSeries may equally hold differenced or simulated values of any sign.
    """

    start: Month
    values: np.ndarray
    transform_log: tuple[TransformStep, ...] = ()
    origin: Optional["TimeSeries"] = None

    def __post_init__(self) -> None:
        arr = as_float_vector(self.values, "TimeSeries values")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "transform_log", tuple(self.transform_log))
        if self.transform_log and self.origin is None:
            raise DataError("a transformed TimeSeries must carry its origin")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def end(self) -> Month:
        """Month of the last observation."""
        return self.start + (len(self) - 1)

    def months(self) -> list[Month]:
        return [self.start + i for i in range(len(self))]

    def index_of(self, month: Month) -> int:
        offset = month - self.start
        if not 0 <= offset < len(self):
            raise DataError(
                f"month {month} outside series span {self.start}..{self.end}"
            )
        return offset

    def root(self) -> "TimeSeries":
        """The raw series this one was derived from (itself if untransformed)."""
        return self.origin if self.origin is not None else self


def _derive(ts: TimeSeries, start: Month, values: np.ndarray,
            new_steps: Sequence[TransformStep]) -> TimeSeries:
    return TimeSeries(
        start=start,
        values=values,
        transform_log=ts.transform_log + tuple(new_steps),
        origin=ts.root(),
    )


# ---------------------------------------------------------------------------
# Differencing and integration
# ---------------------------------------------------------------------------

def _diff_once(values: np.ndarray, lag: int) -> np.ndarray:
    return values[lag:] - values[:-lag]


def _difference_values(values: np.ndarray, d: int, D: int, s: int) -> np.ndarray:
    out = values
    for _ in range(D):
        out = _diff_once(out, s)
    for _ in range(d):
        out = _diff_once(out, 1)
    return out


def difference(ts: TimeSeries, d: int, D: int = 0, s: int = 12) -> TimeSeries:
    """Apply D seasonal (lag s) then d regular (lag 1) differences.

    The result has length ``len(ts) - d - D*s`` and starts ``d + D*s``
    months later. Returns ``ts`` unchanged when ``d == D == 0``.
    """
    d, D, s = int(d), int(D), int(s)
    if d < 0 or D < 0:
        raise DataError("differencing orders must be non-negative")
    if D > 0 and s < 2:
        raise DataError("seasonal differencing needs a period s >= 2")
    if d == 0 and D == 0:
        return ts
    consumed = d + D * s
    if len(ts) <= consumed:
        raise InsufficientDataError(
            f"differencing (d={d}, D={D}, s={s}) consumes {consumed} observations "
            f"but the series has only {len(ts)}"
        )
    out = _difference_values(ts.values, d, D, s)
    steps = []
    if D > 0:
        steps.append(TransformStep.seasonal_difference(D, s))
    if d > 0:
        steps.append(TransformStep.regular_difference(d))
    return _derive(ts, ts.start + consumed, out, steps)


def _difference_stages(steps: Sequence[TransformStep]) -> list[int]:
    """Expand difference steps into per-pass lags, in application order."""
    lags: list[int] = []
    for step in steps:
        if step.kind == SEASONAL_DIFFERENCE:
            lags.extend([step.period] * step.order)
        elif step.kind == REGULAR_DIFFERENCE:
            lags.extend([1] * step.order)
        else:
            raise DataError(f"not a difference step: {step.kind}")
    return lags


def _integrate_values(diffed: np.ndarray, anchor: np.ndarray,
                      lags: Sequence[int]) -> np.ndarray:
    """Invert a chain of single differencing passes given the leading values."""
    # leading prefix of the series at each stage, obtained by differencing
    # the anchor itself
    prefixes: list[np.ndarray] = [anchor]
    for lag in lags:
        prev = prefixes[-1]
        prefixes.append(_diff_once(prev, lag) if prev.size > lag else np.empty(0))

    cur = diffed
    for k in range(len(lags) - 1, -1, -1):
        lag = lags[k]
        lead = prefixes[k]
        out = np.empty(cur.size + lag, dtype=np.float64)
        out[: lead.size] = lead
        for t in range(lead.size, out.size):
            out[t] = cur[t - lag] + out[t - lag]
        cur = out
    return cur


def integrate(ts: TimeSeries, anchor) -> TimeSeries:
    """Undo the trailing differencing steps of ``ts`` using ``anchor``.

    ``anchor`` must hold the leading observations consumed by the trailing
    run of difference steps in ``ts.transform_log`` (``d + D*s`` values, on
    the pre-differencing scale). Returns ``ts`` unchanged when there is no
    trailing difference step and the anchor is empty.
    """
    anchor = np.asarray(anchor, dtype=np.float64)
    tail: list[TransformStep] = []
    for step in reversed(ts.transform_log):
        if step.kind in (REGULAR_DIFFERENCE, SEASONAL_DIFFERENCE):
            tail.append(step)
        else:
            break
    tail.reverse()
    consumed = sum(step.consumed for step in tail)
    if anchor.size != consumed:
        raise DataError(
            f"anchor length {anchor.size} does not match the {consumed} "
            "observations consumed by the trailing difference steps"
        )
    if not tail:
        return ts
    lags = _difference_stages(tail)
    restored = _integrate_values(ts.values, anchor, lags)
    remaining = ts.transform_log[: len(ts.transform_log) - len(tail)]
    origin = ts.root() if remaining else None
    return TimeSeries(
        start=ts.start - consumed,
        values=restored,
        transform_log=remaining,
        origin=origin,
    )


def _continue_integration(history: np.ndarray, future: np.ndarray,
                          d: int, D: int, s: int) -> np.ndarray:
    """Map future values on the differenced scale back to the original scale,
    anchored on the full (undifferenced) history."""
    lags = [s] * D + [1] * d
    # full series at each differencing stage
    chain = [history]
    for lag in lags:
        chain.append(_diff_once(chain[-1], lag))

    cur = future
    for k in range(len(lags) - 1, -1, -1):
        lag = lags[k]
        hist = chain[k]
        out = np.empty(cur.size, dtype=np.float64)
        for j in range(cur.size):
            back = out[j - lag] if j >= lag else hist[hist.size + j - lag]
            out[j] = cur[j] + back
        cur = out
    return cur


# ---------------------------------------------------------------------------
# Box-Cox transform pair
# ---------------------------------------------------------------------------

def boxcox_values(values: np.ndarray, lam: float,
                  variant: str = BOXCOX_SHIFTED) -> np.ndarray:
    """Box-Cox transform on a plain array. Both published forms:
    shifted ((y^l - 1)/l) and power (y^l); natural log at l = 0 for both."""
    values = np.asarray(values, dtype=np.float64)
    if np.any(values <= 0.0):
        raise TransformDomainError("Box-Cox requires strictly positive values")
    if lam == 0.0:
        return np.log(values)
    if variant == BOXCOX_SHIFTED:
        return (np.power(values, lam) - 1.0) / lam
    if variant == BOXCOX_POWER:
        return np.power(values, lam)
    raise DataError(f"unknown Box-Cox variant {variant!r}")


def inv_boxcox_values(values: np.ndarray, lam: float,
                      variant: str = BOXCOX_SHIFTED) -> np.ndarray:
    """Inverse of :func:`boxcox_values` on a plain array."""
    values = np.asarray(values, dtype=np.float64)
    if lam == 0.0:
        return np.exp(values)
    if variant == BOXCOX_SHIFTED:
        base = lam * values + 1.0
        if np.any(base <= 0.0):
            raise TransformDomainError(
                "inverse shifted Box-Cox undefined: lambda*w + 1 <= 0"
            )
        return np.power(base, 1.0 / lam)
    if variant == BOXCOX_POWER:
        if np.any(values <= 0.0):
            raise TransformDomainError("inverse power Box-Cox requires w > 0")
        return np.power(values, 1.0 / lam)
    raise DataError(f"unknown Box-Cox variant {variant!r}")


def boxcox(ts: TimeSeries, lam: float, variant: str = BOXCOX_SHIFTED) -> TimeSeries:
    """Box-Cox transform of a series; the step is recorded in the log."""
    out = boxcox_values(ts.values, lam, variant)
    return _derive(ts, ts.start, out, [TransformStep.box_cox(lam, variant)])


def inv_boxcox(ts: TimeSeries, lam: float,
               variant: str = BOXCOX_SHIFTED) -> TimeSeries:
    """Invert a Box-Cox transform.

    When the series carries a transform log, its most recent step must be
    the matching Box-Cox step, which is removed from the log. A series with
    no lineage is transformed as plain values.
    """
    if ts.transform_log:
        last = ts.transform_log[-1]
        if last.kind != BOX_COX or last.lam != lam or last.variant != variant:
            raise DataError(
                "inv_boxcox(lambda={}, variant={}) does not match the series' "
                "most recent transform step".format(lam, variant)
            )
        remaining = ts.transform_log[:-1]
    else:
        remaining = ()
    out = inv_boxcox_values(ts.values, lam, variant)
    origin = ts.root() if remaining else None
    return TimeSeries(start=ts.start, values=out,
                      transform_log=remaining, origin=origin)


def select_lambda(ts: TimeSeries, s: int = 12,
                  bounds: tuple[float, float] = (-1.0, 2.0)) -> float:
    """Choose a Box-Cox lambda by Guerrero's coefficient-of-variation method.

    The series is cut into consecutive blocks of one season length; lambda
    minimizes the coefficient of variation of ``sd_i / mean_i^(1-lambda)``
    across blocks. Deterministic for fixed input; invariant under scaling
    of the series.
    """
    s = int(s)
    if s < 2:
        raise DataError("season length must be >= 2")
    values = ts.values
    if values.size < 2 * s:
        raise InsufficientDataError(
            f"Guerrero lambda selection needs at least two full seasons "
            f"({2 * s} observations), got {values.size}"
        )
    check_positive_values(values, "Guerrero lambda selection")

    n_blocks = values.size // s
    trimmed = values[values.size - n_blocks * s:]  # keep the most recent blocks
    blocks = trimmed.reshape(n_blocks, s)
    means = blocks.mean(axis=1)
    sds = blocks.std(axis=1, ddof=1)

    def cv(lam: float) -> float:
        ratios = sds / np.power(means, 1.0 - lam)
        m = ratios.mean()
        if m <= 0.0:
            return np.inf
        return ratios.std(ddof=1) / m

    res = optimize.minimize_scalar(cv, bounds=bounds, method="bounded",
                                   options={"xatol": 1e-7})
    return float(res.x)


# ---------------------------------------------------------------------------
# Splitting and concatenation
# ---------------------------------------------------------------------------

def split_at(ts: TimeSeries, boundary: Month) -> tuple[TimeSeries, TimeSeries]:
    """Split into (up to and including ``boundary``, everything after).

    The boundary must lie strictly inside the span so both parts are
    non-empty. Only untransformed series can be split, since a slice of a
    derived series has no meaningful transform lineage.
    """
    if ts.transform_log:
        raise DataError("split_at requires an untransformed series")
    offset = boundary - ts.start
    if offset < 0 or boundary >= ts.end:
        raise DataError(
            f"split boundary {boundary} not strictly inside span "
            f"{ts.start}..{ts.end}"
        )
    head = TimeSeries(start=ts.start, values=ts.values[: offset + 1])
    tail = TimeSeries(start=boundary + 1, values=ts.values[offset + 1:])
    return head, tail


def concat(head: TimeSeries, tail: TimeSeries) -> TimeSeries:
    """Rejoin two contiguous untransformed series."""
    if head.transform_log or tail.transform_log:
        raise DataError("concat requires untransformed series")
    if tail.start != head.end + 1:
        raise DataError(
            f"series are not contiguous: {head.end} is followed by {tail.start}"
        )
    return TimeSeries(start=head.start,
                      values=np.concatenate([head.values, tail.values]))


# ---------------------------------------------------------------------------
# Transform-log replay
# ---------------------------------------------------------------------------

def apply_steps(values: np.ndarray, steps: Sequence[TransformStep]) -> np.ndarray:
    """Apply recorded transform steps to raw values, in order."""
    out = np.asarray(values, dtype=np.float64)
    for step in steps:
        if step.kind == BOX_COX:
            out = boxcox_values(out, step.lam, step.variant)
        elif step.kind == SEASONAL_DIFFERENCE:
            out = _difference_values(out, 0, step.order, step.period)
        elif step.kind == REGULAR_DIFFERENCE:
            out = _difference_values(out, step.order, 0, 1)
        else:
            raise DataError(f"unknown transform kind {step.kind!r}")
    return out


def replay(ts: TimeSeries) -> np.ndarray:
    """Re-run ``ts.transform_log`` on the stored origin.

    The result equals ``ts.values`` bit for bit; this is the determinism
    check behind the transform lineage.
    """
    return apply_steps(ts.root().values, ts.transform_log)
