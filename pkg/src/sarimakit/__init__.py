"""Seasonal ARIMA forecasting toolkit.

Box-Jenkins identification (ACF/PACF, ADF, Box-Cox), two-stage CSS-then-ML
SARIMA estimation, residual diagnostics, AIC/RMSE model selection, forecast
back-transformation, and a tourism earnings-loss projection layer. A batch
CLI (``sarimakit``) drives the full pipeline on CSV data.
"""

from .correlogram import (
    CorrelogramResult,
    acf,
    default_max_lag,
    pacf,
    sample_acf,
    sample_pacf,
    white_noise_bound,
)
from .diagnostics import (
    DiagnosticsReport,
    LjungBoxResult,
    ShapiroWilkResult,
    diagnose,
    ljung_box,
    ljung_box_pvalue,
    shapiro_wilk,
)
from .earnings import EarningsAssumptions, EarningsProjection, project_loss
from .estimators import BoxCoxTransformer, Differencer, SarimaForecaster
from .exceptions import (
    AllFitsFailedError,
    ConstantSeriesError,
    DataError,
    InsufficientDataError,
    InvertibilityError,
    NumericalError,
    SarimaKitError,
    SingularityError,
    TransformDomainError,
)
from .forecasting import AccuracyResult, ForecastResult, forecast, rmse
from .month import Month
from .sarima import (
    CoefficientTest,
    FitResult,
    PolyExpansion,
    SarimaParams,
    SarimaSpec,
    aic,
    coefficient_tests,
    css_objective,
    evaluate,
    expand,
    fit,
    log_likelihood,
    psi_weights,
)
from .selection import Candidate, SelectionReport, build_grid, grid_search
from .series import (
    TimeSeries,
    TransformStep,
    boxcox,
    concat,
    difference,
    integrate,
    inv_boxcox,
    replay,
    select_lambda,
    split_at,
)
from .simulate import SimulationConfig, simulate
from .stationarity import AdfResult, adf_test

__version__ = "0.1.0"

__all__ = [
    "AccuracyResult",
    "AdfResult",
    "AllFitsFailedError",
    "BoxCoxTransformer",
    "Candidate",
    "CoefficientTest",
    "ConstantSeriesError",
    "CorrelogramResult",
    "DataError",
    "DiagnosticsReport",
    "Differencer",
    "EarningsAssumptions",
    "EarningsProjection",
    "FitResult",
    "ForecastResult",
    "InsufficientDataError",
    "InvertibilityError",
    "LjungBoxResult",
    "Month",
    "NumericalError",
    "PolyExpansion",
    "SarimaForecaster",
    "SarimaKitError",
    "SarimaParams",
    "SarimaSpec",
    "SelectionReport",
    "ShapiroWilkResult",
    "SimulationConfig",
    "SingularityError",
    "TimeSeries",
    "TransformDomainError",
    "TransformStep",
    "acf",
    "adf_test",
    "aic",
    "boxcox",
    "coefficient_tests",
    "concat",
    "css_objective",
    "default_max_lag",
    "diagnose",
    "difference",
    "evaluate",
    "expand",
    "fit",
    "forecast",
    "grid_search",
    "build_grid",
    "integrate",
    "inv_boxcox",
    "ljung_box",
    "ljung_box_pvalue",
    "log_likelihood",
    "pacf",
    "project_loss",
    "psi_weights",
    "replay",
    "rmse",
    "sample_acf",
    "sample_pacf",
    "select_lambda",
    "shapiro_wilk",
    "simulate",
    "split_at",
    "white_noise_bound",
]
