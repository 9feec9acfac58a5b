"""Table builder, sampling harness, and scan driver."""

import math

import numpy as np
import pytest

from qaoa_linear.errors import DegenerateProbabilityError
from qaoa_linear.experiments import (
    build_tables,
    cell_seed,
    conjecture_scan,
    sample_until_optimum,
)
from qaoa_linear.ising import LinearIsing, replicate
from qaoa_linear.optimizers import OptimizerSpec, default_portfolio
from qaoa_linear.probability import QaoaParams, prob_opt

LEAN_SPECS = (
    OptimizerSpec("nelder-mead", budget=2000, restarts=2),
    OptimizerSpec("differential-evolution", budget=2000, restarts=2),
)


class TestCellSeed:
    def test_deterministic_and_distinct(self):
        seen = set()
        for m in range(1, 8):
            for p in range(1, 6):
                s = cell_seed(1, m, p)
                assert s == cell_seed(1, m, p)
                seen.add(s)
        assert len(seen) == 35

    def test_master_seed_matters(self):
        assert cell_seed(1, 2, 3) != cell_seed(2, 2, 3)


class TestBuildTables:
    def test_first_column_landmarks(self):
        table = build_tables(2, 1, LEAN_SPECS)
        assert table.prob_at(1, 1) == pytest.approx(1.0, abs=1e-3)
        assert table.prob_at(2, 1) == pytest.approx(0.882385, abs=1e-3)

    def test_base_identity(self):
        table = build_tables(3, 2, LEAN_SPECS)
        for i, m in enumerate(table.m_values):
            for j in range(len(table.p_values)):
                recomputed = table.prob[i, j] ** (-1.0 / m)
                assert abs(recomputed - table.base[i, j]) <= 1e-12

    def test_m3_p2_base_landmark(self):
        table = build_tables(3, 2, default_portfolio(seed=1, budget=4000, restarts=2))
        assert table.base_at(3, 2) == pytest.approx(1.01910, abs=1e-3)

    def test_prob_nonincreasing_down_columns(self):
        table = build_tables(4, 2, LEAN_SPECS)
        for j in range(table.prob.shape[1]):
            column = table.prob[:, j]
            assert all(column[i + 1] <= column[i] + 1e-6 for i in range(len(column) - 1))

    def test_threads_do_not_change_values(self):
        sequential = build_tables(2, 2, LEAN_SPECS, threads=1)
        threaded = build_tables(2, 2, LEAN_SPECS, threads=4)
        assert np.array_equal(sequential.prob, threaded.prob)

    def test_csv_format(self):
        table = build_tables(1, 1, LEAN_SPECS)
        text = table.to_csv()
        lines = text.split("\n")
        assert lines[0] == "m,p,prob,base"
        assert lines[1] == "1,1,1.000000,1.00000"
        assert text.endswith("\n")
        assert "\r" not in text

    def test_validation(self):
        with pytest.raises(ValueError):
            build_tables(0, 1, LEAN_SPECS)
        with pytest.raises(ValueError):
            build_tables(1, 1, ())
        with pytest.raises(ValueError):
            build_tables(1, 1, LEAN_SPECS, threads=0)


class TestSampling:
    def test_perfect_recovery_means_one_trial(self):
        params = QaoaParams((math.pi / 4,), (math.pi / 4,))
        report = sample_until_optimum(LinearIsing((1.0,)), params, runs=200, seed=3)
        assert report.mean_trials == 1.0
        assert report.ci95_halfwidth == 0.0
        assert report.true_prob == pytest.approx(1.0, abs=1e-12)

    def test_uniform_four_qubits(self):
        report = sample_until_optimum(
            LinearIsing((1.0,) * 4), QaoaParams.zero(1), runs=4000, seed=7
        )
        assert report.mean_trials == pytest.approx(16.0, rel=0.10)

    def test_mean_within_confidence_interval(self):
        model = LinearIsing((1.0, 2.0))
        params = QaoaParams((0.4728,), (math.pi / 4,))
        report = sample_until_optimum(model, params, runs=10000, seed=11)
        expected = 1.0 / report.true_prob
        assert abs(report.mean_trials - expected) <= report.ci95_halfwidth

    def test_law_draw_regime_matches_reciprocal(self):
        # 14 uniform qubits: expected 16384 trials, past the literal cutoff
        model = LinearIsing((1.0,) * 14)
        report = sample_until_optimum(model, QaoaParams.zero(1), runs=2000, seed=13)
        assert report.true_prob == pytest.approx(2.0 ** -14, abs=1e-12)
        assert report.mean_trials == pytest.approx(2.0 ** 14, rel=0.10)

    def test_refuses_degenerate_probability(self):
        model = replicate(LinearIsing((1.0,)), 40)
        with pytest.raises(DegenerateProbabilityError):
            sample_until_optimum(model, QaoaParams.zero(1), runs=10, seed=1)

    def test_reproducible(self):
        model = LinearIsing((1.0, 2.0))
        params = QaoaParams((0.3,), (0.8,))
        a = sample_until_optimum(model, params, runs=500, seed=21)
        b = sample_until_optimum(model, params, runs=500, seed=21)
        assert a.mean_trials == b.mean_trials

    def test_run_count_validated(self):
        with pytest.raises(ValueError):
            sample_until_optimum(LinearIsing((1.0,)), QaoaParams.zero(1), runs=0)


class TestConjectureScan:
    def test_p1_profile(self):
        entries = conjecture_scan(1, 3, LEAN_SPECS)
        assert [e.m for e in entries] == [1, 2, 3]
        assert [e.below_one for e in entries] == [False, True, True]
        assert not any(e.anomaly for e in entries)

    def test_anomaly_flag_fires_on_loose_tolerance(self):
        # tol=0.5 treats 0.88 as "at one" for m=2 > p=1: the flag must fire
        entries = conjecture_scan(1, 2, LEAN_SPECS, tol=0.5)
        assert entries[1].below_one is False
        assert entries[1].anomaly is True

    def test_uses_same_seeds_as_tables(self):
        entries = conjecture_scan(1, 2, LEAN_SPECS)
        table = build_tables(2, 1, LEAN_SPECS)
        assert entries[0].best_prob == table.prob_at(1, 1)
        assert entries[1].best_prob == table.prob_at(2, 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            conjecture_scan(0, 3, LEAN_SPECS)
        with pytest.raises(ValueError):
            conjecture_scan(1, 2, LEAN_SPECS, tol=1.5)
