"""Residual diagnostics: Ljung-Box, Shapiro-Wilk, and residual correlograms.

The Ljung-Box p-value is reported under two degrees-of-freedom conventions:
the headline uses df = m (which reproduces published figures of the kind
this toolkit targets), the adjusted variant uses df = m - fitdf. Burn-in
residuals from the zero pre-sample recursion are excluded from every check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from ._validation import as_float_vector
from .correlogram import CorrelogramResult, acf, pacf, sample_acf, white_noise_bound
from .exceptions import ConstantSeriesError, DataError, InsufficientDataError
from .sarima import FitResult


# ---------------------------------------------------------------------------
# Ljung-Box portmanteau test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LjungBoxResult:
    """Ljung-Box Q* statistic and its chi-square p-value.

    Attributes
    ----------
    q_statistic : float
        n(n+2) * sum_{k=1..m} r_k^2 / (n-k).
    m : int
        Number of lags accumulated.
    fitdf : int
        Model degrees of freedom subtracted from m.
    df : int
        Chi-square degrees of freedom, m - fitdf.
    p_value : float
        Survival probability of Q* under chi-square(df).
    """

    q_statistic: float
    m: int
    fitdf: int
    df: int
    p_value: float


def ljung_box_pvalue(q_statistic: float, df: int) -> float:
    """Chi-square survival probability of a Ljung-Box statistic."""
    if df < 1:
        raise DataError(f"degrees of freedom must be >= 1, got {df}")
    if q_statistic < 0.0:
        raise DataError(f"Q* must be non-negative, got {q_statistic}")
    return float(stats.chi2.sf(q_statistic, df))


def ljung_box(residuals, m: int = 20, fitdf: int = 0) -> LjungBoxResult:
    """Ljung-Box (modified Box-Pierce) test of joint residual autocorrelation."""
    x = as_float_vector(residuals, "residuals")
    n = x.size
    m = int(m)
    fitdf = int(fitdf)
    if fitdf < 0:
        raise DataError(f"fitdf must be non-negative, got {fitdf}")
    if not fitdf < m < n:
        raise DataError(
            f"need fitdf < m < n (fitdf={fitdf}, m={m}, n={n})"
        )
    r = sample_acf(x, m)[1:]
    q = float(n * (n + 2) * np.sum(r * r / (n - np.arange(1, m + 1))))
    df = m - fitdf
    return LjungBoxResult(q_statistic=q, m=m, fitdf=fitdf, df=df,
                          p_value=ljung_box_pvalue(q, df))


# ---------------------------------------------------------------------------
# Shapiro-Wilk W test (Royston's approximation, AS R94)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapiroWilkResult:
    """Shapiro-Wilk W statistic and normal-approximation p-value."""

    w_statistic: float
    p_value: float
    n: int


# Royston's polynomial constants, highest order first.
_SW_C1 = (-2.706056, 4.434685, -2.07119, -0.147981, 0.221157, 0.0)
_SW_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_SW_C3 = (-0.0006714, 0.025054, -0.39978, 0.544)
_SW_C4 = (-0.0020322, 0.062767, -0.77857, 1.3822)
_SW_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_SW_C6 = (0.0030302, -0.082676, -0.4803)
_SW_G = (0.459, -2.273)


def _shapiro_weights(n: int) -> np.ndarray:
    """Upper-half coefficients a_{n}, a_{n-1}, ... of Royston's W statistic."""
    n2 = n // 2
    if n == 3:
        return np.array([math.sqrt(0.5)])
    # expected normal order statistics of the lower half are negative;
    # negate to get the upper-half magnitudes a_n, a_{n-1}, ...
    m = -stats.norm.ppf((np.arange(1, n2 + 1) - 0.375) / (n + 0.25))
    summ2 = 2.0 * float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a = m.copy()
    a_n = float(np.polyval(_SW_C1, rsn)) + m[0] / ssumm2
    if n > 5:
        a_n1 = float(np.polyval(_SW_C2, rsn)) + m[1] / ssumm2
        fac = math.sqrt(
            (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
            / (1.0 - 2.0 * a_n ** 2 - 2.0 * a_n1 ** 2)
        )
        a[0], a[1] = a_n, a_n1
        a[2:] = m[2:] / fac
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a_n ** 2))
        a[0] = a_n
        a[1:] = m[1:] / fac
    return a


def shapiro_wilk(sample) -> ShapiroWilkResult:
    """Shapiro-Wilk normality test for 3 <= n <= 5000 observations."""
    x = as_float_vector(sample, "sample")
    n = x.size
    if not 3 <= n <= 5000:
        raise DataError(f"Shapiro-Wilk is valid for 3 <= n <= 5000, got {n}")
    x = np.sort(x)
    rng = x[-1] - x[0]
    if rng <= 0.0:
        raise ConstantSeriesError("Shapiro-Wilk undefined for a constant sample")

    a_upper = _shapiro_weights(n)  # a_n, a_{n-1}, ...
    n2 = a_upper.size
    # antisymmetric coefficient vector over the sorted sample
    coeffs = np.zeros(n)
    coeffs[n - 1 - np.arange(n2)] = a_upper
    coeffs[np.arange(n2)] = -a_upper

    dev = x - x.mean()
    ssq = float(dev @ dev)
    w = float(np.dot(coeffs, x)) ** 2 / ssq
    w = min(w, 1.0)

    if n == 3:
        pi6 = 6.0 / math.pi
        stqr = math.asin(math.sqrt(0.75))
        p = pi6 * (math.asin(math.sqrt(w)) - stqr)
        p = min(max(p, 0.0), 1.0)
        return ShapiroWilkResult(w_statistic=w, p_value=p, n=n)

    w1 = 1.0 - w
    if w1 <= 0.0:
        return ShapiroWilkResult(w_statistic=w, p_value=1.0, n=n)
    if n <= 11:
        gamma = float(np.polyval(_SW_G, n))
        if gamma - math.log(w1) <= 0.0:
            return ShapiroWilkResult(w_statistic=w, p_value=1e-19, n=n)
        y = -math.log(gamma - math.log(w1))
        mu = float(np.polyval(_SW_C3, n))
        sigma = math.exp(float(np.polyval(_SW_C4, n)))
    else:
        ln_n = math.log(n)
        y = math.log(w1)
        mu = float(np.polyval(_SW_C5, ln_n))
        sigma = math.exp(float(np.polyval(_SW_C6, ln_n)))
    p = float(stats.norm.sf((y - mu) / sigma))
    return ShapiroWilkResult(w_statistic=w, p_value=p, n=n)


# ---------------------------------------------------------------------------
# Aggregate residual report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagnosticsReport:
    """Residual-analysis battery for a fitted model at level alpha.

    ``ljung_box`` is the headline test with df = m; ``ljung_box_adjusted``
    subtracts the model degrees of freedom (df = m - #coefficients).
    ``verdicts`` maps check name to pass/fail at ``alpha``.
    """

    ljung_box: LjungBoxResult
    ljung_box_adjusted: Optional[LjungBoxResult]
    shapiro_wilk: ShapiroWilkResult
    residual_acf: CorrelogramResult
    residual_pacf: CorrelogramResult
    all_lags_within_bounds: bool
    alpha: float
    verdicts: dict[str, bool]

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())


def diagnose(fit_result: FitResult, m: int = 20,
             alpha: float = 0.05) -> DiagnosticsReport:
    """Run the full residual battery on a fit's post-burn-in residuals.

    The residual correlograms carry the usual per-lag plotting bound; the
    ``all_lags_within_bounds`` verdict, however, is judged family-wise (the
    per-lag level is Bonferroni-adjusted across the 2m comparisons), so a
    well-specified model is not failed just for showing one stray lag.
    """
    resid = fit_result.residuals_after_burn_in()
    if resid.size == 0:
        raise InsufficientDataError("no residuals beyond burn-in to diagnose")

    fitdf = fit_result.spec.n_coefficients
    lb = ljung_box(resid, m=m, fitdf=0)
    lb_adj = ljung_box(resid, m=m, fitdf=fitdf) if fitdf < m else None
    sw = shapiro_wilk(resid)
    r_acf = acf(resid, max_lag=m, alpha=alpha)
    r_pacf = pacf(resid, max_lag=m, alpha=alpha)
    family_bound = white_noise_bound(resid.size, alpha / (2 * m))
    within = bool(
        np.all(np.abs(r_acf.values) <= family_bound)
        and np.all(np.abs(r_pacf.values) <= family_bound)
    )

    verdicts = {
        "ljung_box": lb.p_value >= alpha,
        "shapiro_wilk": sw.p_value >= alpha,
        "residual_correlogram": within,
    }
    return DiagnosticsReport(
        ljung_box=lb,
        ljung_box_adjusted=lb_adj,
        shapiro_wilk=sw,
        residual_acf=r_acf,
        residual_pacf=r_pacf,
        all_lags_within_bounds=within,
        alpha=alpha,
        verdicts=verdicts,
    )
