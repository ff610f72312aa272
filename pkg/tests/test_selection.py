import numpy as np
import pytest

import sarimakit as sk
from sarimakit.exceptions import AllFitsFailedError, DataError, InsufficientDataError
from sarimakit.sarima import SarimaParams, SarimaSpec
from sarimakit.selection import Candidate, pick_winner
from sarimakit.series import split_at


def simulated_split(spec, params, n=180, seed=0, test_len=12):
    sim = sk.simulate(sk.SimulationConfig(spec=spec, params=params, n=n,
                                          seed=seed, start=sk.Month(2005, 1)))
    return split_at(sim, sim.end - test_len)


class TestGridSearch:
    def test_single_spec_grid_chooses_it(self):
        spec = SarimaSpec(p=1, d=0, q=0)
        train, test = simulated_split(spec, SarimaParams(ar=(0.5,)), seed=3)
        report = sk.grid_search(train, test, max_p=1, max_q=0, max_P=0, max_Q=0,
                                d_values=(0,), D_values=(0,), s=12, top_k=1,
                                include_constant="never")
        # grid contains only ARIMA(1,0,0); it must be chosen
        assert len(report.candidates) == 1
        assert report.chosen.spec == spec
        assert report.chosen.rmse is not None

    def test_aic_close_to_truth_for_ar1_data(self):
        spec = SarimaSpec(p=1, d=0, q=0)
        hits = 0
        reps = 25
        for seed in range(reps):
            train, test = simulated_split(spec, SarimaParams(ar=(0.6,)),
                                          n=212, seed=seed)
            report = sk.grid_search(train, test, max_p=2, max_q=2, max_P=0,
                                    max_Q=0, d_values=(0,), D_values=(0,),
                                    top_k=2, include_constant="never")
            truth = next(c for c in report.candidates if c.spec == spec)
            if truth.aic is not None and report.chosen.aic is not None \
                    and report.chosen.aic >= truth.aic - 2.0:
                hits += 1
        assert hits >= 0.8 * reps

    def test_chosen_has_lowest_rmse_among_top_k(self):
        spec = SarimaSpec(p=1, d=0, q=1)
        train, test = simulated_split(spec, SarimaParams(ar=(0.5,), ma=(0.3,)),
                                      seed=11)
        report = sk.grid_search(train, test, max_p=1, max_q=1, max_P=0, max_Q=0,
                                d_values=(0,), D_values=(0,), top_k=3,
                                include_constant="never")
        evaluated = [c for c in report.candidates if c.rmse is not None]
        assert len(evaluated) == 3
        assert report.chosen.rmse == min(c.rmse for c in evaluated)

    def test_ranking_is_permutation_sorted_by_aic(self):
        spec = SarimaSpec(p=1, d=0, q=0)
        train, test = simulated_split(spec, SarimaParams(ar=(0.5,)), seed=21)
        report = sk.grid_search(train, test, max_p=1, max_q=1, max_P=0, max_Q=0,
                                d_values=(0,), D_values=(0,), top_k=2,
                                include_constant="never")
        assert sorted(report.ranking) == list(range(len(report.candidates)))
        aics = [report.candidates[i].aic for i in report.ranking
                if report.candidates[i].aic is not None]
        assert aics == sorted(aics)

    def test_determinism(self):
        spec = SarimaSpec(p=1, d=0, q=0)
        train, test = simulated_split(spec, SarimaParams(ar=(0.4,)), seed=30)
        kwargs = dict(max_p=1, max_q=1, max_P=0, max_Q=0, d_values=(0,),
                      D_values=(0,), top_k=2, include_constant="never")
        a = sk.grid_search(train, test, **kwargs)
        b = sk.grid_search(train, test, **kwargs)
        assert a.ranking == b.ranking
        assert a.chosen.spec == b.chosen.spec
        for ca, cb in zip(a.candidates, b.candidates):
            assert ca.aic == cb.aic and ca.rmse == cb.rmse

    def test_train_too_short(self, rng, make_series):
        short = make_series(rng.uniform(1, 2, size=30))
        test = make_series(rng.uniform(1, 2, size=12), start=short.end + 1)
        with pytest.raises(InsufficientDataError):
            sk.grid_search(short, test)

    def test_bounds_validation(self, rng, make_series):
        train = make_series(rng.uniform(1, 2, size=60))
        test = make_series(rng.uniform(1, 2, size=12), start=train.end + 1)
        with pytest.raises(DataError):
            sk.grid_search(train, test, max_p=4)

    def test_empty_grid(self):
        with pytest.raises(DataError):
            sk.build_grid(max_p=0, max_q=0, max_P=0, max_Q=0,
                          d_values=(1,), D_values=(0,),
                          include_constant="never")

    def test_all_fits_failed(self, rng, make_series, monkeypatch):
        train = make_series(rng.uniform(1, 2, size=60))
        test = make_series(rng.uniform(1, 2, size=12), start=train.end + 1)
        import sarimakit.selection as selection_module

        def broken_fit(*args, **kwargs):
            raise sk.NumericalError("boom")

        monkeypatch.setattr(selection_module, "fit", broken_fit)
        with pytest.raises(AllFitsFailedError):
            sk.grid_search(train, test, max_p=1, max_q=0, max_P=0, max_Q=0,
                           d_values=(0,), D_values=(0,),
                           include_constant="never")


class TestPickWinner:
    def _candidate(self, rmse, n_coef=1, label_suffix="a"):
        spec = SarimaSpec(p=n_coef, d=0, q=0)
        return Candidate(spec=spec, aic=0.0, rmse=rmse, converged=True,
                         error=None, verdicts=None)

    def test_lowest_rmse_wins(self):
        pool = [self._candidate(5.0), self._candidate(3.0), self._candidate(9.0)]
        assert pick_winner(pool).rmse == 3.0

    def test_adding_candidate_never_hurts(self, rng):
        pool = [self._candidate(float(r)) for r in rng.uniform(1, 10, size=5)]
        best = pick_winner(pool).rmse
        extended = pool + [self._candidate(float(rng.uniform(1, 10)))]
        assert pick_winner(extended).rmse <= best

    def test_tie_broken_by_parameter_count(self):
        small = Candidate(spec=SarimaSpec(p=1, d=0, q=0), aic=0.0, rmse=4.0,
                          converged=True, error=None, verdicts=None)
        big = Candidate(spec=SarimaSpec(p=2, d=0, q=0), aic=0.0, rmse=4.0,
                        converged=True, error=None, verdicts=None)
        assert pick_winner([big, small]).spec == small.spec

    def test_empty_pool(self):
        with pytest.raises(AllFitsFailedError):
            pick_winner([])
