"""Candidate-model grid search ranked by AIC, decided by holdout RMSE.

Every spec in the grid is fitted on the training series; candidates are
ranked by AIC and the top K converged models are evaluated on the test set
by RMSE of their back-transformed forecasts. The RMSE winner is chosen,
with ties broken by parameter count and then by model label, so identical
inputs always produce the identical report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .diagnostics import diagnose
from .exceptions import AllFitsFailedError, DataError, InsufficientDataError
from .forecasting import forecast, rmse
from .sarima import FitResult, SarimaSpec, fit
from .series import TimeSeries


@dataclass(frozen=True)
class Candidate:
    """One grid entry: its fit summary and, for top-K models, holdout RMSE."""

    spec: SarimaSpec
    aic: Optional[float]
    rmse: Optional[float]
    converged: bool
    error: Optional[str]
    verdicts: Optional[dict[str, bool]]

    @property
    def label(self) -> str:
        return self.spec.label()


@dataclass(frozen=True)
class SelectionReport:
    """Grid-search outcome.

    ``ranking`` is a permutation of candidate indices sorted by AIC
    ascending (failed fits last); ``chosen`` is the lowest-RMSE candidate
    among the top ``top_k`` converged models.
    """

    candidates: tuple[Candidate, ...]
    ranking: tuple[int, ...]
    chosen: Candidate
    top_k: int

    def ranked_candidates(self) -> list[Candidate]:
        return [self.candidates[i] for i in self.ranking]


def _sort_key(candidate: Candidate) -> tuple:
    a = candidate.aic if (candidate.aic is not None and np.isfinite(candidate.aic)) else np.inf
    return (a, candidate.spec.n_coefficients, candidate.label)


def pick_winner(evaluated: Sequence[Candidate]) -> Candidate:
    """Lowest holdout RMSE; ties go to fewer parameters, then label order."""
    scored = [c for c in evaluated if c.rmse is not None]
    if not scored:
        raise AllFitsFailedError("no candidate produced a holdout RMSE")
    return min(scored, key=lambda c: (c.rmse, c.spec.n_coefficients, c.label))


def build_grid(*, max_p: int = 2, max_q: int = 2, max_P: int = 2, max_Q: int = 2,
               d_values: Sequence[int] = (0, 1), D_values: Sequence[int] = (0, 1),
               s: int = 12, include_constant: str = "auto") -> list[SarimaSpec]:
    """Enumerate the candidate grid in deterministic lexicographic order."""
    for name, bound in (("max_p", max_p), ("max_q", max_q),
                        ("max_P", max_P), ("max_Q", max_Q)):
        if not 0 <= bound <= 3:
            raise DataError(f"{name} must be in 0..3, got {bound}")
    if include_constant not in ("auto", "always", "never"):
        raise DataError(f"include_constant must be auto/always/never, got {include_constant!r}")
    specs = []
    for p in range(max_p + 1):
        for d in d_values:
            for q in range(max_q + 1):
                for P in range(max_P + 1):
                    for D in D_values:
                        for Q in range(max_Q + 1):
                            if include_constant == "auto":
                                constant = (d + D == 0)
                            else:
                                constant = include_constant == "always"
                            if p + q + P + Q == 0 and not constant:
                                continue
                            specs.append(SarimaSpec(
                                p=p, d=int(d), q=q, P=P, D=int(D), Q=Q, s=s,
                                include_constant=constant,
                            ))
    if not specs:
        raise DataError("candidate grid is empty")
    return specs


def _holdout_rmse(fit_result: FitResult, test: TimeSeries) -> float:
    fc = forecast(fit_result, h=len(test))
    return rmse(fc.point, test.values).rmse


def grid_search(train: TimeSeries, test: TimeSeries, *,
                max_p: int = 2, max_q: int = 2, max_P: int = 2, max_Q: int = 2,
                d_values: Sequence[int] = (0, 1), D_values: Sequence[int] = (0, 1),
                s: int = 12, top_k: int = 2, include_constant: str = "auto",
                diagnostics_lags: int = 20) -> SelectionReport:
    """Fit the grid on ``train``; judge the top-K by RMSE on ``test``.

    ``train`` is on the modeling scale (a Box-Cox step in its lineage is
    undone before forecasts are compared), ``test`` on the original scale.
    """
    if len(train) < 4 * s:
        raise InsufficientDataError(
            f"grid search needs at least 4 seasons of training data "
            f"({4 * s} observations), got {len(train)}"
        )
    if top_k < 1:
        raise DataError(f"top_k must be >= 1, got {top_k}")
    specs = build_grid(max_p=max_p, max_q=max_q, max_P=max_P, max_Q=max_Q,
                       d_values=d_values, D_values=D_values, s=s,
                       include_constant=include_constant)

    fits: dict[int, FitResult] = {}
    candidates: list[Candidate] = []
    for idx, spec in enumerate(specs):
        try:
            result = fit(spec, train)
        except Exception as exc:  # noqa: BLE001 - any failed fit is recorded
            candidates.append(Candidate(spec=spec, aic=None, rmse=None,
                                        converged=False, error=str(exc),
                                        verdicts=None))
            continue
        fits[idx] = result
        candidates.append(Candidate(spec=spec, aic=result.aic, rmse=None,
                                    converged=result.converged, error=None,
                                    verdicts=None))

    if not fits:
        raise AllFitsFailedError("every candidate in the grid failed to fit")

    order = sorted(range(len(candidates)), key=lambda i: _sort_key(candidates[i]))
    eligible = [i for i in order if candidates[i].converged]
    if not eligible:
        raise AllFitsFailedError("no candidate converged")
    evaluate = eligible[:top_k]

    for i in evaluate:
        result = fits[i]
        c = candidates[i]
        holdout = _holdout_rmse(result, test)
        verdicts = None
        try:
            verdicts = dict(diagnose(result, m=diagnostics_lags).verdicts)
        except Exception:  # noqa: BLE001 - diagnostics are advisory here
            verdicts = None
        candidates[i] = Candidate(spec=c.spec, aic=c.aic, rmse=holdout,
                                  converged=c.converged, error=None,
                                  verdicts=verdicts)

    chosen = pick_winner([candidates[i] for i in evaluate])
    return SelectionReport(
        candidates=tuple(candidates),
        ranking=tuple(order),
        chosen=chosen,
        top_k=top_k,
    )
