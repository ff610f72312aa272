"""Seasonal ARIMA representation and two-stage CSS-then-ML estimation.

Model convention (matching the R-style tables this toolkit reproduces):

    (1 - phi_1 B - ...)(1 - Phi_1 B^s - ...) z_t
        = c + (1 + theta_1 B + ...)(1 + Theta_1 B^s + ...) eps_t

where z_t is the series after d regular and D seasonal differences. The
innovation recursion sets all pre-sample values and errors to zero, so the
conditional sum of squares is (1/n) * sum_t e_t^2 over the whole differenced
sample. Fitting minimizes that objective with a derivative-free simplex
search, then polishes the same optimum by quasi-Newton iteration on the
profiled Gaussian log-likelihood; standard errors come from the numerically
approximated Hessian at the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize, stats
from scipy.signal import lfilter

from ._validation import as_float_vector
from .exceptions import (
    DataError,
    InsufficientDataError,
    InvertibilityError,
    NumericalError,
)
from .month import Month
from .series import TimeSeries, difference

_BARRIER_VALUE = 1e10
_LN_2PI = math.log(2.0 * math.pi)
_DEFAULT_START = Month(2000, 1)


# ---------------------------------------------------------------------------
# Model order and parameter containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SarimaSpec:
    """Model order (p,d,q)(P,D,Q)_s plus the constant-term switch."""

    p: int
    d: int
    q: int
    P: int = 0
    D: int = 0
    Q: int = 0
    s: int = 12
    include_constant: bool = False

    def __post_init__(self) -> None:
        orders = (self.p, self.d, self.q, self.P, self.D, self.Q)
        if any(o < 0 for o in orders):
            raise DataError(f"model orders must be non-negative, got {orders}")
        if self.P + self.D + self.Q > 0 and self.s < 2:
            raise DataError(f"seasonal model needs season length >= 2, got s={self.s}")
        if self.p + self.q + self.P + self.Q == 0 and not self.include_constant:
            raise DataError("model has no parameters: add an order or a constant")

    @property
    def n_coefficients(self) -> int:
        """Coefficients estimated by fit (innovation variance not counted)."""
        return self.p + self.q + self.P + self.Q + int(self.include_constant)

    @property
    def seasonal(self) -> bool:
        return self.P + self.D + self.Q > 0

    def coefficient_names(self) -> list[str]:
        names = [f"ar{i}" for i in range(1, self.p + 1)]
        names += [f"ma{i}" for i in range(1, self.q + 1)]
        names += [f"sar{i}" for i in range(1, self.P + 1)]
        names += [f"sma{i}" for i in range(1, self.Q + 1)]
        if self.include_constant:
            names.append("constant")
        return names

    def label(self) -> str:
        base = f"ARIMA({self.p},{self.d},{self.q})"
        if self.seasonal:
            base += f"({self.P},{self.D},{self.Q})[{self.s}]"
        if self.include_constant:
            base += "+c"
        return base


@dataclass(frozen=True)
class SarimaParams:
    """Coefficient vector and innovation variance for a :class:`SarimaSpec`."""

    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()
    sar: tuple[float, ...] = ()
    sma: tuple[float, ...] = ()
    constant: Optional[float] = None
    sigma2: float = 1.0

    def __post_init__(self) -> None:
        for name in ("ar", "ma", "sar", "sma"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        # sigma2 = 0 is tolerated so noise-free processes can be simulated;
        # likelihood evaluation with a supplied zero variance still errors
        if self.sigma2 < 0.0 or not np.isfinite(self.sigma2):
            raise DataError(f"sigma2 must be non-negative and finite, got {self.sigma2}")

    def validate_for(self, spec: SarimaSpec) -> None:
        shape = (len(self.ar), len(self.ma), len(self.sar), len(self.sma))
        expected = (spec.p, spec.q, spec.P, spec.Q)
        if shape != expected:
            raise DataError(
                f"parameter shape {shape} does not match spec orders {expected}"
            )
        if spec.include_constant and self.constant is None:
            raise DataError("spec includes a constant but params.constant is None")
        if not spec.include_constant and self.constant is not None:
            raise DataError("params.constant set but spec has no constant term")

    def coefficient_vector(self) -> np.ndarray:
        vec = list(self.ar) + list(self.ma) + list(self.sar) + list(self.sma)
        if self.constant is not None:
            vec.append(self.constant)
        return np.asarray(vec, dtype=np.float64)


def params_from_vector(spec: SarimaSpec, theta: np.ndarray,
                       sigma2: float = 1.0) -> SarimaParams:
    """Unpack an optimizer vector (ar, ma, sar, sma[, constant]) into params."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.size != spec.n_coefficients:
        raise DataError(
            f"expected {spec.n_coefficients} coefficients, got {theta.size}"
        )
    i = 0
    ar = tuple(theta[i:i + spec.p]); i += spec.p
    ma = tuple(theta[i:i + spec.q]); i += spec.q
    sar = tuple(theta[i:i + spec.P]); i += spec.P
    sma = tuple(theta[i:i + spec.Q]); i += spec.Q
    constant = float(theta[i]) if spec.include_constant else None
    return SarimaParams(ar=ar, ma=ma, sar=sar, sma=sma,
                        constant=constant, sigma2=sigma2)


# ---------------------------------------------------------------------------
# Polynomial expansion
# ---------------------------------------------------------------------------

def _factor_poly(coeffs: Sequence[float], sign: float, gap: int = 1) -> np.ndarray:
    """Lag polynomial 1 + sign*c_1 B^gap + sign*c_2 B^(2 gap) + ..."""
    poly = np.zeros(len(coeffs) * gap + 1)
    poly[0] = 1.0
    for j, c in enumerate(coeffs, start=1):
        poly[j * gap] = sign * c
    return poly


def ar_polynomial(spec: SarimaSpec, params: SarimaParams) -> np.ndarray:
    """Expanded AR lag polynomial (1 - sum phi B^i)(1 - sum Phi B^{js})."""
    return np.convolve(_factor_poly(params.ar, -1.0),
                       _factor_poly(params.sar, -1.0, spec.s))


def ma_polynomial(spec: SarimaSpec, params: SarimaParams) -> np.ndarray:
    """Expanded MA lag polynomial (1 + sum theta B^i)(1 + sum Theta B^{js})."""
    return np.convolve(_factor_poly(params.ma, 1.0),
                       _factor_poly(params.sma, 1.0, spec.s))


def min_factor_root(spec: SarimaSpec, params: SarimaParams) -> float:
    """Smallest root modulus over the four factor polynomials.

    Each factor is examined in its own lag variable (B for the regular
    factors, B^s for the seasonal ones), which is the scale on which the
    stationarity/invertibility barrier operates.
    """
    smallest = np.inf
    for coeffs, sign in ((params.ar, -1.0), (params.sar, -1.0),
                         (params.ma, 1.0), (params.sma, 1.0)):
        if not coeffs or all(c == 0.0 for c in coeffs):
            continue
        poly = _factor_poly(coeffs, sign)
        roots = np.roots(poly[::-1])
        if roots.size:
            smallest = min(smallest, float(np.min(np.abs(roots))))
    return smallest


def is_stationary_invertible(spec: SarimaSpec, params: SarimaParams,
                             radius: float = 1.0) -> bool:
    """True when every factor root lies strictly outside ``radius``."""
    return min_factor_root(spec, params) > radius


def _impulse_response(num: np.ndarray, den: np.ndarray, n: int) -> np.ndarray:
    impulse = np.zeros(n)
    impulse[0] = 1.0
    return lfilter(num, den, impulse)


@dataclass(frozen=True)
class PolyExpansion:
    """Expanded polynomials of the multiplicative seasonal model.

    ``ar_coeffs[k-1]`` / ``ma_coeffs[k-1]`` are the lag-k weights of the
    recursion ``z_t = sum ar_coeffs*z + e_t + sum ma_coeffs*e (+ c)``;
    ``pi_weights`` are the AR(infinity) weights of the one-step error
    expansion ``e_t = sum_j pi_j z_{t-j}`` with ``pi_0 = 1``.
    """

    ar_coeffs: np.ndarray
    ma_coeffs: np.ndarray
    pi_weights: np.ndarray

    @property
    def ar_poly(self) -> np.ndarray:
        return np.concatenate([[1.0], -self.ar_coeffs])

    @property
    def ma_poly(self) -> np.ndarray:
        return np.concatenate([[1.0], self.ma_coeffs])


def expand(spec: SarimaSpec, params: SarimaParams,
           n_weights: int = 100) -> PolyExpansion:
    """Multiply out the seasonal factors and derive the AR(inf) weights."""
    params.validate_for(spec)
    arp = ar_polynomial(spec, params)
    map_ = ma_polynomial(spec, params)
    if map_.size > 1:
        roots = np.roots(map_[::-1])
        if roots.size and np.min(np.abs(roots)) <= 1.0:
            raise InvertibilityError(
                "MA polynomial has a root on or inside the unit circle; "
                "AR(infinity) weights do not exist"
            )
    pi = _impulse_response(arp, map_, int(n_weights))
    return PolyExpansion(ar_coeffs=-arp[1:], ma_coeffs=map_[1:], pi_weights=pi)


def psi_weights(spec: SarimaSpec, params: SarimaParams, n: int) -> np.ndarray:
    """MA(infinity) weights psi_0..psi_{n-1} (psi_0 = 1) of the ARMA part."""
    params.validate_for(spec)
    arp = ar_polynomial(spec, params)
    if arp.size > 1:
        roots = np.roots(arp[::-1])
        if roots.size and np.min(np.abs(roots)) <= 1.0:
            raise InvertibilityError(
                "AR polynomial has a root on or inside the unit circle; "
                "MA(infinity) weights do not exist"
            )
    return _impulse_response(ma_polynomial(spec, params), arp, int(n))


# ---------------------------------------------------------------------------
# Innovation recursion, CSS, likelihood
# ---------------------------------------------------------------------------

def _series_values(ts) -> np.ndarray:
    if isinstance(ts, TimeSeries):
        return ts.values
    return as_float_vector(ts, "series")


def innovations(spec: SarimaSpec, params: SarimaParams, ts) -> np.ndarray:
    """One-step errors e_t from the recursion with zero pre-sample values."""
    params.validate_for(spec)
    x = _series_values(ts)
    arp = ar_polynomial(spec, params)
    map_ = ma_polynomial(spec, params)
    e = lfilter(arp, map_, x)
    if params.constant:
        e = e - params.constant * lfilter([1.0], map_, np.ones_like(x))
    return e


def css_objective(spec: SarimaSpec, params: SarimaParams, ts) -> float:
    """Conditional sum of squares (1/n) * sum e_t^2 on the differenced scale."""
    if not is_stationary_invertible(spec, params):
        raise InvertibilityError(
            "parameters outside the stationary/invertible region"
        )
    e = innovations(spec, params, ts)
    return float(np.mean(e * e))


def log_likelihood(spec: SarimaSpec, params: SarimaParams, ts,
                   profile_sigma: bool = True) -> float:
    """Gaussian conditional log-likelihood of the differenced series.

    With ``profile_sigma`` the innovation variance is concentrated out at
    its optimum sum(e^2)/n; otherwise ``params.sigma2`` is used.
    """
    if not is_stationary_invertible(spec, params):
        raise InvertibilityError(
            "parameters outside the stationary/invertible region"
        )
    e = innovations(spec, params, ts)
    n = e.size
    ssr = float(e @ e)
    if profile_sigma:
        sigma2 = ssr / n
        if sigma2 <= 0.0:
            raise NumericalError("zero residual variance; likelihood unbounded")
        return -0.5 * n * (_LN_2PI + math.log(sigma2) + 1.0)
    sigma2 = params.sigma2
    if sigma2 <= 0.0:
        raise NumericalError("likelihood undefined for zero innovation variance")
    return -0.5 * n * (_LN_2PI + math.log(sigma2)) - ssr / (2.0 * sigma2)


def aic(log_lik: float, n_coefficients: int) -> float:
    """Akaike criterion -2*lnL + 2*r with r = n_coefficients + 1.

    The innovation variance counts as an estimated parameter, which is the
    convention that reproduces published ARIMA tables from their own
    log-likelihood rows.
    """
    if n_coefficients < 0:
        raise DataError("n_coefficients must be non-negative")
    return -2.0 * log_lik + 2.0 * (n_coefficients + 1)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    """Converged SARIMA fit: parameters, inference columns, and residuals.

    ``residuals`` live on the differenced (modeling) scale; the first
    ``burn_in`` of them depend on the zero pre-sample convention and are
    excluded from diagnostics. ``series`` is the modeling-scale input and
    ``differenced`` the series the recursion actually ran on.
    """

    spec: SarimaSpec
    params: SarimaParams
    std_errors: Optional[np.ndarray]
    z_values: Optional[np.ndarray]
    p_values: Optional[np.ndarray]
    log_likelihood: float
    aic: float
    residuals: np.ndarray
    converged: bool
    iterations: int
    series: TimeSeries
    differenced: TimeSeries
    burn_in: int

    @property
    def n_effective(self) -> int:
        """Observations entering the recursion (after differencing)."""
        return len(self.differenced)

    def residuals_after_burn_in(self) -> np.ndarray:
        return self.residuals[self.burn_in:]


def _neutral_start(spec: SarimaSpec, w: np.ndarray) -> np.ndarray:
    theta = np.full(spec.n_coefficients, 0.1)
    if spec.include_constant:
        theta[-1] = float(w.mean())
    return theta


def _burn_in(spec: SarimaSpec) -> int:
    return max(spec.p + spec.P * spec.s, spec.q + spec.Q * spec.s)


def _numerical_hessian(f: Callable[[np.ndarray], float], x: np.ndarray,
                       rel_step: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian approximation."""
    k = x.size
    h = rel_step * np.maximum(1.0, np.abs(x))
    hess = np.empty((k, k))
    f0 = f(x)
    for i in range(k):
        ei = np.zeros(k); ei[i] = h[i]
        hess[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (h[i] * h[i])
        for j in range(i + 1, k):
            ej = np.zeros(k); ej[j] = h[j]
            hess[i, j] = hess[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return hess


def _standard_errors(neg_loglik: Callable[[np.ndarray], float],
                     theta: np.ndarray) -> Optional[np.ndarray]:
    try:
        hess = _numerical_hessian(neg_loglik, theta)
    except (NumericalError, InvertibilityError, FloatingPointError):
        return None
    if not np.all(np.isfinite(hess)):
        return None
    try:
        np.linalg.cholesky(hess)  # positive definiteness check
        cov = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        return None
    diag = np.diag(cov)
    if np.any(diag <= 0.0):
        return None
    return np.sqrt(diag)


def fit(spec: SarimaSpec, ts: TimeSeries, *,
        barrier_radius: float = 1.001,
        stage1_tol: float = 1e-10,
        stage1_max_evals: Optional[int] = None,
        stage2_gtol: float = 1e-6,
        stage2_max_iter: int = 200,
        start_params: Optional[Sequence[float]] = None) -> FitResult:
    """Two-stage CSS-then-ML fit of ``spec`` to the modeling-scale series.

    ``ts`` is differenced internally per the spec's (d, D, s). Stage one
    minimizes the conditional sum of squares by Nelder-Mead simplex from
    neutral starting values; stage two maximizes the profiled conditional
    Gaussian likelihood by BFGS with finite-difference gradients. Steps
    whose factor polynomial roots fall inside ``barrier_radius`` are
    rejected. Reaching the iteration limit is reported via
    ``converged=False``, not an error.
    """
    if not isinstance(ts, TimeSeries):
        ts = TimeSeries(start=_DEFAULT_START, values=as_float_vector(ts, "series"))
    w_ts = difference(ts, spec.d, spec.D, spec.s)
    w = w_ts.values
    n = w.size

    min_len = 3 * spec.n_coefficients
    if spec.seasonal:
        min_len = max(min_len, 2 * spec.s)
    if n < min_len:
        raise InsufficientDataError(
            f"{spec.label()}: need at least {min_len} observations after "
            f"differencing, got {n}"
        )

    def residual_ssr(theta: np.ndarray) -> float:
        params = params_from_vector(spec, theta)
        e = innovations(spec, params, w)
        return float(e @ e)

    def valid(theta: np.ndarray) -> bool:
        params = params_from_vector(spec, theta)
        return min_factor_root(spec, params) > barrier_radius

    def css_penalized(theta: np.ndarray) -> float:
        if not valid(theta):
            return _BARRIER_VALUE
        return residual_ssr(theta) / n

    def neg_loglik(theta: np.ndarray) -> float:
        sigma2 = residual_ssr(theta) / n
        if sigma2 <= 0.0:
            raise NumericalError("zero residual variance during optimization")
        return 0.5 * n * (_LN_2PI + math.log(sigma2) + 1.0)

    def neg_loglik_penalized(theta: np.ndarray) -> float:
        if not valid(theta):
            return _BARRIER_VALUE
        return neg_loglik(theta)

    theta0 = (np.asarray(start_params, dtype=np.float64)
              if start_params is not None else _neutral_start(spec, w))
    if theta0.size != spec.n_coefficients:
        raise DataError(
            f"start_params must have {spec.n_coefficients} entries, got {theta0.size}"
        )

    dim = max(1, spec.n_coefficients)
    max_evals = stage1_max_evals if stage1_max_evals is not None else 500 * dim
    res1 = optimize.minimize(
        css_penalized, theta0, method="Nelder-Mead",
        options={"fatol": stage1_tol, "xatol": 1e-8, "adaptive": dim > 2,
                 "maxfev": max_evals, "maxiter": max_evals},
    )
    x1 = res1.x

    res2 = optimize.minimize(
        neg_loglik_penalized, x1, method="BFGS", jac="3-point",
        options={"gtol": stage2_gtol, "maxiter": stage2_max_iter},
    )
    theta_hat = res2.x if res2.fun <= neg_loglik_penalized(x1) else x1
    if not valid(theta_hat):
        # fall back to the best valid point seen
        theta_hat = x1 if valid(x1) else theta0
    # per contract, only exhausting an iteration budget counts as failure
    # to converge; a precision-loss stop at a barrier-pinned optimum does not
    converged = bool(res2.status != 1 and res1.status != 1)

    e = innovations(spec, params_from_vector(spec, theta_hat), w)
    sigma2 = float(e @ e) / n
    params = params_from_vector(spec, theta_hat, sigma2=sigma2)
    loglik = log_likelihood(spec, params, w, profile_sigma=True)

    # curvature is probed on the smooth unpenalized objective so that
    # near-barrier optima still get finite standard errors
    std_errors = _standard_errors(neg_loglik, theta_hat)
    z_values = p_values = None
    if std_errors is not None:
        z_values = theta_hat / std_errors
        p_values = 2.0 * stats.norm.sf(np.abs(z_values))

    return FitResult(
        spec=spec,
        params=params,
        std_errors=std_errors,
        z_values=z_values,
        p_values=p_values,
        log_likelihood=loglik,
        aic=aic(loglik, spec.n_coefficients),
        residuals=e,
        converged=converged,
        iterations=int(res1.nit) + int(res2.nit),
        series=ts,
        differenced=w_ts,
        burn_in=_burn_in(spec),
    )


def evaluate(spec: SarimaSpec, params: SarimaParams, ts: TimeSeries) -> FitResult:
    """Build a :class:`FitResult` for known parameters without optimizing.

    Useful for applying a fitted model to new data and for verification
    against closed forms. Standard errors are not computed.
    """
    params.validate_for(spec)
    if not is_stationary_invertible(spec, params):
        raise InvertibilityError("parameters outside the stationary/invertible region")
    w_ts = difference(ts, spec.d, spec.D, spec.s)
    e = innovations(spec, params, w_ts.values)
    loglik = log_likelihood(spec, params, w_ts.values, profile_sigma=False)
    return FitResult(
        spec=spec,
        params=params,
        std_errors=None,
        z_values=None,
        p_values=None,
        log_likelihood=loglik,
        aic=aic(loglik, spec.n_coefficients),
        residuals=e,
        converged=True,
        iterations=0,
        series=ts,
        differenced=w_ts,
        burn_in=_burn_in(spec),
    )


# ---------------------------------------------------------------------------
# Coefficient inference table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientTest:
    name: str
    estimate: float
    std_error: float
    z_value: float
    p_value: float
    stars: str


def _stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def coefficient_tests(fit_result: FitResult) -> list[CoefficientTest]:
    """Per-coefficient z tests: z = estimate/SE, p two-sided normal."""
    if fit_result.std_errors is None:
        raise NumericalError(
            "standard errors unavailable (Hessian was not positive definite)"
        )
    names = fit_result.spec.coefficient_names()
    estimates = fit_result.params.coefficient_vector()
    rows = []
    for name, est, se in zip(names, estimates, fit_result.std_errors):
        z = est / se
        p = float(2.0 * stats.norm.sf(abs(z)))
        rows.append(CoefficientTest(name=name, estimate=float(est),
                                    std_error=float(se), z_value=float(z),
                                    p_value=p, stars=_stars(p)))
    return rows
