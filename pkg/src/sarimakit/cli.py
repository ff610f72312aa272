"""Batch command-line surface for the full Box-Jenkins workflow.

Subcommands mirror the pipeline stages (``ingest``, ``identify``, ``fit``,
``diagnose``, ``select``, ``forecast``, ``earnings``, ``simulate``) plus the
composite ``pipeline``. Every stage writes machine-readable reports: one
JSON report per stage and per-figure CSVs (series, correlograms with bound
columns, residual panels, forecast fan, monthly-loss bars).

File emission is all-or-nothing: outputs accumulate in memory and are only
written once the whole invocation has succeeded, so error paths leave the
output directory untouched. Report bodies carry no timestamps; identical
input and configuration produce byte-identical files.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .correlogram import CorrelogramResult, acf, default_max_lag, pacf
from .diagnostics import DiagnosticsReport, diagnose
from .earnings import EarningsAssumptions, project_loss
from .exceptions import DataError, NumericalError, SarimaKitError
from .forecasting import ForecastResult, forecast, rmse
from .month import Month
from .sarima import (
    FitResult,
    SarimaParams,
    SarimaSpec,
    coefficient_tests,
    fit,
)
from .selection import SelectionReport, grid_search
from .series import TimeSeries, boxcox, difference, select_lambda, split_at
from .simulate import SimulationConfig, simulate
from .stationarity import adf_test

USAGE_ERROR = 1
DATA_ERROR = 2
NUMERICAL_ERROR = 3


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IngestedDataset:
    """A validated input file: the parsed series plus its span summary."""

    path: str
    series: TimeSeries

    @property
    def summary(self) -> str:
        ts = self.series
        return (f"{self.path}: {len(ts)} monthly observations, "
                f"{ts.start} .. {ts.end}")


def ingest(path) -> IngestedDataset:
    """Parse and validate a two-column CSV (``month,arrivals``).

    Months must be consecutive ISO year-months with no gaps or duplicates;
    arrivals must be strictly positive numbers.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"data file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8 ({exc})") from exc

    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [cell.strip().lower() for cell in rows[0]]
    if header[:2] != ["month", "arrivals"]:
        raise DataError(
            f"{path}: line 1: expected header 'month,arrivals', got "
            f"{','.join(rows[0][:2])!r}"
        )

    months: list[Month] = []
    values: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise DataError(f"{path}: line {lineno}: expected 2 columns, got {len(row)}")
        try:
            month = Month.parse(row[0])
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from exc
        try:
            value = float(row[1])
        except ValueError as exc:
            raise DataError(
                f"{path}: line {lineno}: arrivals value {row[1]!r} is not a number"
            ) from exc
        if value <= 0.0:
            raise DataError(
                f"{path}: line {lineno}: non-positive arrivals ({row[1]}) in {month}"
            )
        if months:
            expected = months[-1] + 1
            if month == months[-1]:
                raise DataError(f"{path}: line {lineno}: duplicate month {month}")
            if month < expected:
                raise DataError(
                    f"{path}: line {lineno}: month {month} out of order "
                    f"(expected {expected})"
                )
            if month > expected:
                raise DataError(
                    f"{path}: line {lineno}: gap in months: expected {expected}, "
                    f"got {month}"
                )
        months.append(month)
        values.append(value)
    if not values:
        raise DataError(f"{path}: no data rows")
    return IngestedDataset(path=str(path), series=TimeSeries(months[0], np.array(values)))


# ---------------------------------------------------------------------------
# Deterministic emission
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _csv_text(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _jsonable(value):
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, Month):
        return str(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


class Emitter:
    """Accumulates report files and writes them only on success."""

    def __init__(self) -> None:
        self.files: dict[str, str] = {}

    def add(self, relpath: str, text: str) -> None:
        self.files[relpath] = text

    def add_csv(self, relpath: str, header: Sequence[str], rows) -> None:
        self.add(relpath, _csv_text(header, rows))

    def add_json(self, relpath: str, obj) -> None:
        self.add(relpath, _json_text(_jsonable(obj)))

    def flush(self, outdir) -> list[str]:
        outdir = Path(outdir)
        written = []
        for relpath in sorted(self.files):
            target = outdir / relpath
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(self.files[relpath], encoding="utf-8", newline="\n")
            written.append(str(target))
        return written


def _correlogram_rows(result: CorrelogramResult):
    for lag, value in zip(result.lags, result.values):
        yield (int(lag), float(value), -result.bound, result.bound)


def _emit_correlogram(emitter: Emitter, relpath: str,
                      result: CorrelogramResult) -> None:
    emitter.add_csv(relpath, ["lag", "value", "lower_bound", "upper_bound"],
                    _correlogram_rows(result))


def _emit_series(emitter: Emitter, relpath: str, ts: TimeSeries,
                 value_column: str = "value") -> None:
    emitter.add_csv(relpath, ["month", value_column],
                    ((str(m), v) for m, v in zip(ts.months(), ts.values)))


def _fit_report(fit_result: FitResult) -> dict:
    spec = fit_result.spec
    report = {
        "model": spec.label(),
        "order": [spec.p, spec.d, spec.q],
        "seasonal_order": [spec.P, spec.D, spec.Q],
        "season_length": spec.s,
        "include_constant": spec.include_constant,
        "n_effective": fit_result.n_effective,
        "log_likelihood": fit_result.log_likelihood,
        "sigma2": fit_result.params.sigma2,
        "aic": fit_result.aic,
        "converged": fit_result.converged,
        "iterations": fit_result.iterations,
        "burn_in": fit_result.burn_in,
    }
    if fit_result.std_errors is not None:
        report["coefficients"] = [
            {
                "name": row.name,
                "estimate": row.estimate,
                "std_error": row.std_error,
                "z_value": row.z_value,
                "p_value": row.p_value,
                "stars": row.stars,
            }
            for row in coefficient_tests(fit_result)
        ]
    else:
        names = spec.coefficient_names()
        estimates = fit_result.params.coefficient_vector()
        report["coefficients"] = [
            {"name": n, "estimate": float(b)} for n, b in zip(names, estimates)
        ]
        report["std_errors_available"] = False
    return report


def _diagnostics_report(report: DiagnosticsReport) -> dict:
    out = {
        "ljung_box": {
            "q_statistic": report.ljung_box.q_statistic,
            "m": report.ljung_box.m,
            "df": report.ljung_box.df,
            "p_value": report.ljung_box.p_value,
        },
        "shapiro_wilk": {
            "w_statistic": report.shapiro_wilk.w_statistic,
            "p_value": report.shapiro_wilk.p_value,
            "n": report.shapiro_wilk.n,
        },
        "all_lags_within_bounds": report.all_lags_within_bounds,
        "alpha": report.alpha,
        "verdicts": report.verdicts,
        "all_pass": report.all_pass,
    }
    if report.ljung_box_adjusted is not None:
        out["ljung_box_adjusted"] = {
            "q_statistic": report.ljung_box_adjusted.q_statistic,
            "m": report.ljung_box_adjusted.m,
            "fitdf": report.ljung_box_adjusted.fitdf,
            "df": report.ljung_box_adjusted.df,
            "p_value": report.ljung_box_adjusted.p_value,
        }
    return out


# ---------------------------------------------------------------------------
# Shared argument handling
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _parse_order(text: str, name: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise DataError(f"{name} must be three comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise DataError(f"{name} must be integers, got {text!r}") from exc


def _parse_coeffs(text: Optional[str]) -> tuple[float, ...]:
    if not text:
        return ()
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise DataError(f"coefficient list {text!r} is not numeric") from exc


def _spec_from_args(args) -> SarimaSpec:
    p, d, q = _parse_order(args.order, "--order")
    P, D, Q = _parse_order(args.seasonal_order, "--seasonal-order")
    if args.constant == "auto":
        constant = (d + D == 0)
    else:
        constant = args.constant == "yes"
    return SarimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q, s=args.season_length,
                      include_constant=constant)


def _resolve_lambda(mode: str, train: TimeSeries, s: int) -> Optional[float]:
    if mode == "none":
        return None
    if mode == "auto":
        return select_lambda(train, s=s)
    try:
        return float(mode)
    except ValueError as exc:
        raise DataError(
            f"--lambda must be 'auto', 'none', or a number, got {mode!r}"
        ) from exc


def _prepare_series(args, need_split: bool = False):
    """Ingest, optionally split, and Box-Cox transform the modeling series.

    Returns (dataset, train_raw, test_raw_or_None, modeling_series, lambda).
    """
    dataset = ingest(args.data)
    raw = dataset.series
    test = None
    train = raw
    if getattr(args, "split", None):
        boundary = Month.parse(args.split)
        train, test = split_at(raw, boundary)
    elif need_split:
        raise DataError("this command requires --split YYYY-MM")
    lam = _resolve_lambda(args.lam, train, args.season_length)
    modeling = train if lam is None else boxcox(train, lam, args.boxcox_variant)
    return dataset, train, test, modeling, lam


def _add_data_options(parser, split_required: bool = False) -> None:
    parser.add_argument("--data", required=True, help="input CSV (month,arrivals)")
    parser.add_argument("--split", required=split_required, default=None,
                        metavar="YYYY-MM",
                        help="train/test boundary (train ends here, inclusive)")
    parser.add_argument("--lambda", dest="lam", default="none",
                        help="Box-Cox lambda: 'auto' (Guerrero), 'none', or a number")
    parser.add_argument("--boxcox-variant", default="shifted",
                        choices=["shifted", "power"],
                        help="which published Box-Cox form to use")
    parser.add_argument("--season-length", type=int, default=12)


def _add_model_options(parser) -> None:
    parser.add_argument("--order", required=True, metavar="p,d,q")
    parser.add_argument("--seasonal-order", default="0,0,0", metavar="P,D,Q")
    parser.add_argument("--constant", default="auto", choices=["auto", "yes", "no"],
                        help="constant term ('auto': only for undifferenced models)")


def _add_out_option(parser, required: bool = False) -> None:
    parser.add_argument("--out", required=required, default=None,
                        help="output directory for report files")


def _add_grid_options(parser) -> None:
    parser.add_argument("--max-p", type=int, default=2)
    parser.add_argument("--max-q", type=int, default=2)
    parser.add_argument("--max-sp", type=int, default=2, help="max seasonal AR order")
    parser.add_argument("--max-sq", type=int, default=2, help="max seasonal MA order")
    parser.add_argument("--d", default="auto",
                        help="regular differencing: 'auto' (ADF) or an integer")
    parser.add_argument("--seasonal-d", default="0",
                        help="seasonal differencing: 0, 1, or 'both'")
    parser.add_argument("--top-k", type=int, default=2,
                        help="AIC short-list length judged by holdout RMSE")


def _decide_d(modeling: TimeSeries, mode: str, s: int) -> tuple[Sequence[int], dict]:
    """Resolve the --d flag into candidate orders, via ADF when 'auto'."""
    info: dict = {"mode": mode}
    if mode != "auto":
        try:
            fixed = int(mode)
        except ValueError as exc:
            raise DataError(f"--d must be 'auto' or an integer, got {mode!r}") from exc
        return (fixed,), info
    level = adf_test(modeling)
    info["adf_level"] = {"statistic": level.statistic, "p_value": level.p_value,
                         "lag_order": level.lag_order}
    if level.reject_unit_root_at_05:
        info["chosen_d"] = 0
        return (0,), info
    diffed = adf_test(difference(modeling, 1))
    info["adf_after_difference"] = {"statistic": diffed.statistic,
                                    "p_value": diffed.p_value,
                                    "lag_order": diffed.lag_order}
    info["chosen_d"] = 1
    return (1,), info


def _decide_D(mode: str) -> Sequence[int]:
    if mode == "both":
        return (0, 1)
    try:
        value = int(mode)
    except ValueError as exc:
        raise DataError(f"--seasonal-d must be 0, 1, or 'both', got {mode!r}") from exc
    if value not in (0, 1):
        raise DataError(f"--seasonal-d must be 0, 1, or 'both', got {mode!r}")
    return (value,)


# ---------------------------------------------------------------------------
# Stage emitters shared by subcommands and the pipeline
# ---------------------------------------------------------------------------

def _emit_identify(emitter: Emitter, train: TimeSeries, modeling: TimeSeries,
                   lam: Optional[float], variant: str, d_info: dict,
                   d_used: int, max_lag: Optional[int]) -> None:
    k_raw = max_lag or default_max_lag(len(train))
    _emit_series(emitter, "identify/series.csv", train)
    _emit_correlogram(emitter, "identify/acf_raw.csv", acf(train, k_raw))
    _emit_correlogram(emitter, "identify/pacf_raw.csv", pacf(train, k_raw))

    stationary = difference(modeling, d_used) if d_used else modeling
    k_tr = min(max_lag or default_max_lag(len(stationary)), len(stationary) - 1)
    _emit_series(emitter, "identify/series_transformed.csv", modeling)
    _emit_correlogram(emitter, "identify/acf_transformed.csv", acf(stationary, k_tr))
    _emit_correlogram(emitter, "identify/pacf_transformed.csv", pacf(stationary, k_tr))

    emitter.add_json("identify/transform.json", {
        "lambda": lam,
        "boxcox_variant": variant if lam is not None else None,
        "d_used_for_correlograms": d_used,
        "n_train": len(train),
        "train_span": [train.start, train.end],
    })
    emitter.add_json("identify/adf.json", d_info)


def _emit_selection(emitter: Emitter, report: SelectionReport) -> None:
    rows = []
    for rank, idx in enumerate(report.ranking, start=1):
        c = report.candidates[idx]
        spec = c.spec
        rows.append((
            rank, spec.label(), spec.p, spec.d, spec.q, spec.P, spec.D, spec.Q,
            spec.s, int(spec.include_constant),
            "" if c.aic is None else c.aic,
            "" if c.rmse is None else c.rmse,
            int(c.converged),
            c.error or "",
        ))
    emitter.add_csv(
        "selection/candidates.csv",
        ["rank", "model", "p", "d", "q", "P", "D", "Q", "s", "constant",
         "aic", "rmse", "converged", "error"],
        rows,
    )
    chosen = report.chosen
    emitter.add_json("selection/report.json", {
        "chosen": chosen.spec.label(),
        "chosen_aic": chosen.aic,
        "chosen_rmse": chosen.rmse,
        "chosen_verdicts": chosen.verdicts,
        "top_k": report.top_k,
        "n_candidates": len(report.candidates),
        "n_converged": sum(1 for c in report.candidates if c.converged),
    })


def _emit_diagnostics(emitter: Emitter, fit_result: FitResult,
                      report: DiagnosticsReport) -> None:
    emitter.add_json("diagnostics/report.json", _diagnostics_report(report))
    resid = fit_result.residuals_after_burn_in()
    start = fit_result.differenced.start + fit_result.burn_in
    months = [start + i for i in range(resid.size)]
    emitter.add_csv("diagnostics/residuals.csv", ["month", "residual"],
                    ((str(m), v) for m, v in zip(months, resid)))
    _emit_correlogram(emitter, "diagnostics/residual_acf.csv", report.residual_acf)
    _emit_correlogram(emitter, "diagnostics/residual_pacf.csv", report.residual_pacf)


def _emit_forecast(emitter: Emitter, fc: ForecastResult,
                   extra: Optional[dict] = None) -> None:
    emitter.add_csv(
        "forecast/forecast.csv",
        ["month", "point", "lower", "upper", "transformed_point"],
        ((str(m), p, lo, hi, tp) for m, p, lo, hi, tp in zip(
            fc.months, fc.point, fc.lower, fc.upper, fc.transformed_point)),
    )
    report = {
        "horizon": fc.horizon,
        "level": fc.level,
        "n_clamped": fc.n_clamped,
        "first_month": fc.months[0],
        "last_month": fc.months[-1],
    }
    if extra:
        report.update(extra)
    emitter.add_json("forecast/report.json", report)


def _emit_earnings(emitter: Emitter, projection, assumptions) -> None:
    emitter.add_csv(
        "earnings/monthly_loss.csv",
        ["month", "arrivals", "loss"],
        ((str(m), a, l) for m, a, l in zip(
            projection.months, projection.arrivals_used, projection.monthly_loss)),
    )
    emitter.add_json("earnings/report.json", {
        "total_loss": projection.total_loss,
        "ade": assumptions.ade,
        "alos_nights": assumptions.alos_nights,
        "window": [assumptions.window_start, assumptions.window_end],
        "n_months": len(projection.months),
    })


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    dataset = ingest(args.data)
    print(dataset.summary)
    return 0


def cmd_identify(args) -> int:
    _, train, _, modeling, lam = _prepare_series(args)
    d_values, d_info = _decide_d(modeling, args.d, args.season_length)
    emitter = Emitter()
    _emit_identify(emitter, train, modeling, lam, args.boxcox_variant,
                   d_info, d_values[0], args.max_lag)
    if args.out:
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    chosen = d_info.get("chosen_d", d_values[0])
    print(f"identify: n={len(train)}, lambda={lam}, d={chosen}")
    return 0


def cmd_fit(args) -> int:
    _, _, _, modeling, lam = _prepare_series(args)
    spec = _spec_from_args(args)
    result = fit(spec, modeling)
    report = _fit_report(result)
    report["lambda"] = lam
    print(f"{spec.label()}: log-likelihood {result.log_likelihood:.2f}, "
          f"AIC {result.aic:.2f}, converged {result.converged}")
    for row in report["coefficients"]:
        se = row.get("std_error")
        if se is None:
            print(f"  {row['name']:>9}  {row['estimate']: .4f}")
        else:
            print(f"  {row['name']:>9}  {row['estimate']: .4f}  (se {se:.4f}, "
                  f"z {row['z_value']:.3f}{row['stars']})")
    if args.out:
        emitter = Emitter()
        emitter.add_json("fit/estimation.json", report)
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    return 0


def cmd_diagnose(args) -> int:
    _, _, _, modeling, _ = _prepare_series(args)
    spec = _spec_from_args(args)
    result = fit(spec, modeling)
    report = diagnose(result, m=args.lags)
    print(f"{spec.label()}: Ljung-Box Q({report.ljung_box.m}) = "
          f"{report.ljung_box.q_statistic:.3f}, p = {report.ljung_box.p_value:.4f}")
    print(f"Shapiro-Wilk W = {report.shapiro_wilk.w_statistic:.4f}, "
          f"p = {report.shapiro_wilk.p_value:.4f}")
    print(f"verdicts: {report.verdicts} -> {'PASS' if report.all_pass else 'FAIL'}")
    if args.out:
        emitter = Emitter()
        _emit_diagnostics(emitter, result, report)
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    return 0


def cmd_select(args) -> int:
    _, train, test, modeling, lam = _prepare_series(args, need_split=True)
    d_values, d_info = _decide_d(modeling, args.d, args.season_length)
    report = grid_search(
        modeling, test,
        max_p=args.max_p, max_q=args.max_q, max_P=args.max_sp, max_Q=args.max_sq,
        d_values=d_values, D_values=_decide_D(args.seasonal_d),
        s=args.season_length, top_k=args.top_k,
    )
    print(f"selected {report.chosen.spec.label()} "
          f"(AIC {report.chosen.aic:.2f}, holdout RMSE {report.chosen.rmse:.2f})")
    if args.out:
        emitter = Emitter()
        _emit_selection(emitter, report)
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    return 0


def cmd_forecast(args) -> int:
    _, _, test, modeling, lam = _prepare_series(args)
    spec = _spec_from_args(args)
    result = fit(spec, modeling)
    fc = forecast(result, h=args.horizon, level=args.level, clamp_negative=True)
    extra = {"model": spec.label(), "lambda": lam}
    if test is not None and len(test) >= 1:
        h_cmp = min(len(test), fc.horizon)
        extra["holdout_rmse"] = rmse(fc.point[:h_cmp], test.values[:h_cmp]).rmse
    for m, p in zip(fc.months, fc.point):
        print(f"{m}  {p:.1f}")
    if args.out:
        emitter = Emitter()
        _emit_forecast(emitter, fc, extra)
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    return 0


def cmd_earnings(args) -> int:
    _, _, _, modeling, _ = _prepare_series(args)
    spec = _spec_from_args(args)
    result = fit(spec, modeling)
    window_start = Month.parse(args.window_start)
    window_end = Month.parse(args.window_end)
    horizon = args.horizon or max(1, window_end - modeling.end)
    fc = forecast(result, h=horizon, level=args.level, clamp_negative=True)
    assumptions = EarningsAssumptions(ade=args.ade, alos_nights=args.alos,
                                      window_start=window_start,
                                      window_end=window_end)
    projection = project_loss(fc, assumptions)
    print(f"projected loss {window_start}..{window_end}: "
          f"{projection.total_loss:,.2f}")
    if args.out:
        emitter = Emitter()
        _emit_forecast(emitter, fc, {"model": spec.label()})
        _emit_earnings(emitter, projection, assumptions)
        for path in emitter.flush(args.out):
            print(f"wrote {path}")
    return 0


def cmd_simulate(args) -> int:
    p, d, q = _parse_order(args.order, "--order")
    P, D, Q = _parse_order(args.seasonal_order, "--seasonal-order")
    spec = SarimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q, s=args.season_length,
                      include_constant=args.constant is not None)
    params = SarimaParams(
        ar=_parse_coeffs(args.ar), ma=_parse_coeffs(args.ma),
        sar=_parse_coeffs(args.sar), sma=_parse_coeffs(args.sma),
        constant=args.constant, sigma2=args.sigma2,
    )
    config = SimulationConfig(spec=spec, params=params, n=args.n,
                              seed=args.seed, burn_in=args.burn_in,
                              start=Month.parse(args.start))
    ts = simulate(config)
    text = _csv_text(["month", "arrivals"],
                     ((str(m), v) for m, v in zip(ts.months(), ts.values)))
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_pipeline(args) -> int:
    dataset, train, test, modeling, lam = _prepare_series(args, need_split=True)
    emitter = Emitter()

    # identification
    d_values, d_info = _decide_d(modeling, args.d, args.season_length)
    _emit_identify(emitter, train, modeling, lam, args.boxcox_variant,
                   d_info, d_values[0], args.max_lag)

    # model contest on the holdout
    report = grid_search(
        modeling, test,
        max_p=args.max_p, max_q=args.max_q, max_P=args.max_sp, max_Q=args.max_sq,
        d_values=d_values, D_values=_decide_D(args.seasonal_d),
        s=args.season_length, top_k=args.top_k,
    )
    _emit_selection(emitter, report)
    chosen_spec = report.chosen.spec

    # estimation and diagnostics of the chosen model on the training data
    train_fit = fit(chosen_spec, modeling)
    train_report = _fit_report(train_fit)
    train_report["lambda"] = lam
    train_report["fitted_on"] = "train"
    emitter.add_json("selection/chosen_fit.json", train_report)
    _emit_diagnostics(emitter, train_fit, diagnose(train_fit, m=args.lags))

    # refit on the full span, forecast beyond the data
    full = dataset.series
    full_modeling = full if lam is None else boxcox(full, lam, args.boxcox_variant)
    full_fit = fit(chosen_spec, full_modeling)
    full_report = _fit_report(full_fit)
    full_report["lambda"] = lam
    full_report["fitted_on"] = "full"
    emitter.add_json("forecast/model.json", full_report)

    window_start = Month.parse(args.window_start) if args.window_start else None
    window_end = Month.parse(args.window_end) if args.window_end else None
    horizon = args.horizon
    if window_end is not None:
        horizon = max(horizon, window_end - full.end)
    fc = forecast(full_fit, h=horizon, level=args.level, clamp_negative=True)
    _emit_forecast(emitter, fc, {
        "model": chosen_spec.label(),
        "lambda": lam,
        "holdout_rmse": report.chosen.rmse,
    })

    # earnings projection when a loss window was requested
    if window_start is not None and window_end is not None:
        assumptions = EarningsAssumptions(ade=args.ade, alos_nights=args.alos,
                                          window_start=window_start,
                                          window_end=window_end)
        projection = project_loss(fc, assumptions)
        _emit_earnings(emitter, projection, assumptions)
        print(f"projected loss {window_start}..{window_end}: "
              f"{projection.total_loss:,.2f}")

    for path in emitter.flush(args.out):
        print(f"wrote {path}")
    print(f"pipeline complete: chose {chosen_spec.label()} "
          f"(AIC {report.chosen.aic:.2f}, holdout RMSE {report.chosen.rmse:.2f})")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="sarimakit",
                     description="Seasonal ARIMA forecasting toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a CSV dataset")
    p.add_argument("--data", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("identify", help="correlograms, ADF, and transform choice")
    _add_data_options(p)
    p.add_argument("--max-lag", type=int, default=None)
    p.add_argument("--d", default="auto")
    _add_out_option(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("fit", help="estimate one SARIMA specification")
    _add_data_options(p)
    _add_model_options(p)
    _add_out_option(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("diagnose", help="residual diagnostics for one model")
    _add_data_options(p)
    _add_model_options(p)
    p.add_argument("--lags", type=int, default=20)
    _add_out_option(p)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("select", help="grid search ranked by AIC, judged by RMSE")
    _add_data_options(p, split_required=True)
    _add_grid_options(p)
    _add_out_option(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("forecast", help="h-step forecasts with intervals")
    _add_data_options(p)
    _add_model_options(p)
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--level", type=float, default=0.95)
    _add_out_option(p)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("earnings", help="earnings-loss projection from forecasts")
    _add_data_options(p)
    _add_model_options(p)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--ade", type=float, required=True,
                   help="average daily expenditure per visitor-night")
    p.add_argument("--alos", type=float, required=True,
                   help="average length of stay in nights")
    p.add_argument("--window-start", required=True, metavar="YYYY-MM")
    p.add_argument("--window-end", required=True, metavar="YYYY-MM")
    _add_out_option(p)
    p.set_defaults(func=cmd_earnings)

    p = sub.add_parser("simulate", help="generate a SARIMA realization as CSV")
    p.add_argument("--order", required=True, metavar="p,d,q")
    p.add_argument("--seasonal-order", default="0,0,0", metavar="P,D,Q")
    p.add_argument("--season-length", type=int, default=12)
    p.add_argument("--ar", default="", help="comma-separated AR coefficients")
    p.add_argument("--ma", default="", help="comma-separated MA coefficients")
    p.add_argument("--sar", default="", help="comma-separated seasonal AR coefficients")
    p.add_argument("--sma", default="", help="comma-separated seasonal MA coefficients")
    p.add_argument("--constant", type=float, default=None)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--start", default="2000-01", metavar="YYYY-MM")
    p.add_argument("--out", default=None, help="output CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", help="identify, select, diagnose, forecast, earnings")
    _add_data_options(p, split_required=True)
    _add_grid_options(p)
    p.add_argument("--max-lag", type=int, default=None)
    p.add_argument("--lags", type=int, default=20, help="Ljung-Box lags")
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--ade", type=float, default=8423.98)
    p.add_argument("--alos", type=float, default=7.0)
    p.add_argument("--window-start", default=None, metavar="YYYY-MM")
    p.add_argument("--window-end", default=None, metavar="YYYY-MM")
    _add_out_option(p, required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"sarimakit: data error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except NumericalError as exc:
        print(f"sarimakit: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except SarimaKitError as exc:
        print(f"sarimakit: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
