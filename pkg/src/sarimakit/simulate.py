"""SARIMA process generator used as the independent oracle in tests.

Gaussian innovations are drawn from NumPy's seeded PCG64 generator, so a
fixed seed reproduces the series bit for bit across runs. The expanded ARMA
recursion runs on the stationary scale, integrations (regular and seasonal)
follow with zero initial conditions, and the burn-in prefix is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .exceptions import DataError, InvertibilityError
from .month import Month
from .sarima import (
    SarimaParams,
    SarimaSpec,
    ar_polynomial,
    is_stationary_invertible,
    ma_polynomial,
)
from .series import TimeSeries


def default_burn_in(s: int) -> int:
    return max(200, 13 * int(s))


@dataclass(frozen=True)
class SimulationConfig:
    """Inputs for one deterministic SARIMA simulation."""

    spec: SarimaSpec
    params: SarimaParams
    n: int
    seed: int = 0
    burn_in: Optional[int] = None
    start: Month = field(default_factory=lambda: Month(2000, 1))

    def resolved_burn_in(self) -> int:
        return default_burn_in(self.spec.s) if self.burn_in is None else int(self.burn_in)


def simulate(config: SimulationConfig) -> TimeSeries:
    """Generate a SARIMA realization of length ``config.n``."""
    spec, params = config.spec, config.params
    params.validate_for(spec)
    if config.n < 1:
        raise DataError(f"simulation length must be >= 1, got {config.n}")
    if not is_stationary_invertible(spec, params):
        raise InvertibilityError(
            "simulation requires stationary and invertible parameters"
        )
    burn_in = config.resolved_burn_in()
    max_degree = max(spec.p + spec.P * spec.s, spec.q + spec.Q * spec.s)
    if burn_in < 10 * max_degree:
        raise DataError(
            f"burn_in must be >= 10 * max polynomial degree "
            f"({10 * max_degree}), got {burn_in}"
        )

    total = burn_in + int(config.n)
    rng = np.random.default_rng(config.seed)
    eps = rng.normal(0.0, np.sqrt(params.sigma2), total)

    arp = ar_polynomial(spec, params)
    map_ = ma_polynomial(spec, params)
    z = lfilter(map_, arp, eps)
    if params.constant:
        z = z + params.constant * lfilter([1.0], arp, np.ones(total))

    # undo the differencing implied by (d, D): regular first, then seasonal,
    # with zero initial conditions
    for _ in range(spec.d):
        z = np.cumsum(z)
    seasonal_den = np.zeros(spec.s + 1)
    seasonal_den[0], seasonal_den[-1] = 1.0, -1.0
    for _ in range(spec.D):
        z = lfilter([1.0], seasonal_den, z)

    return TimeSeries(start=config.start, values=z[burn_in:])
