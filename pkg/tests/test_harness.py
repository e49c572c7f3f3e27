"""Tests for the Monte Carlo replication harness and its diagnostics."""

import math

import numpy as np
import pytest

from fourpoint import (
    AlgoConfig,
    convergence_diagnostic,
    histogram,
    ks_against_normal,
    make_model,
    replicate,
)
from fourpoint.harness import derive_seed, normal_cdf


def smoke_cfg(**kwargs):
    defaults = dict(dim=1, theta0=[0.5], total_budget=4000, m=10, m1=9,
                    m2=1, c0=5.0)
    defaults.update(kwargs)
    return AlgoConfig(**defaults)


class TestSeeds:
    def test_deterministic(self):
        assert derive_seed(123, 7) == derive_seed(123, 7)

    def test_distinct_across_reps_and_masters(self):
        seeds = {derive_seed(m, r) for m in range(20) for r in range(50)}
        assert len(seeds) == 1000

    def test_uint64_range(self):
        s = derive_seed(0, 0)
        assert 0 <= s < 2 ** 64


class TestReplicate:
    def test_records_are_ordered_and_reproducible(self):
        model = make_model("bernoulli_quadratic")
        cfg = smoke_cfg()
        s1, r1 = replicate(model, cfg, "four_point", 8, master_seed=42,
                           n_jobs=1)
        s2, r2 = replicate(model, cfg, "four_point", 8, master_seed=42,
                           n_jobs=1)
        assert [r.rep_id for r in r1] == list(range(8))
        for a, b in zip(r1, r2):
            assert a.seed == b.seed
            assert a.mu_hat == b.mu_hat
            assert a.normalized_stat == b.normalized_stat
            np.testing.assert_array_equal(a.theta_hat, b.theta_hat)

    def test_worker_count_does_not_change_results(self):
        model = make_model("bernoulli_quadratic")
        cfg = smoke_cfg()
        _, serial = replicate(model, cfg, "four_point", 6, master_seed=3,
                              n_jobs=1)
        _, parallel = replicate(model, cfg, "four_point", 6, master_seed=3,
                                n_jobs=3)
        for a, b in zip(serial, parallel):
            assert a.seed == b.seed
            assert a.mu_hat == b.mu_hat
            assert a.sigma_hat == b.sigma_hat

    def test_summary_fields(self):
        model = make_model("bernoulli_quadratic")
        summary, records = replicate(model, smoke_cfg(), "four_point", 5,
                                     master_seed=1, n_jobs=1)
        assert summary.method == "four_point"
        assert summary.replications == 5
        assert 0.0 <= summary.coverage_rate <= 1.0
        assert summary.stat_sd > 0.0
        assert 0.0 <= summary.ks_statistic <= 1.0
        counts = sum(n for _, _, n in summary.histogram)
        assert counts == 5
        stats = [r.normalized_stat for r in records]
        assert summary.stat_mean == pytest.approx(float(np.mean(stats)))

    def test_single_replication_has_no_spread_stats(self):
        model = make_model("bernoulli_quadratic")
        summary, _ = replicate(model, smoke_cfg(), "four_point", 1,
                               master_seed=1, n_jobs=1)
        assert summary.stat_sd is None
        assert summary.ks_statistic is None

    def test_master_seed_changes_records(self):
        model = make_model("bernoulli_quadratic")
        _, r1 = replicate(model, smoke_cfg(), "four_point", 3, master_seed=1,
                          n_jobs=1)
        _, r2 = replicate(model, smoke_cfg(), "four_point", 3, master_seed=2,
                          n_jobs=1)
        assert r1[0].seed != r2[0].seed

    def test_central_fd_method(self):
        model = make_model("bernoulli_quadratic")
        summary, _ = replicate(model, smoke_cfg(), "central_fd", 3,
                               master_seed=1, n_jobs=1)
        assert summary.method == "central_fd"

    def test_bad_inputs(self):
        model = make_model("bernoulli_quadratic")
        with pytest.raises(ValueError):
            replicate(model, smoke_cfg(), "four_point", 0, master_seed=1)
        with pytest.raises(ValueError):
            replicate(model, smoke_cfg(), "gradient_descent", 3,
                      master_seed=1, n_jobs=1)


class TestNormalityDiagnostics:
    def test_normal_cdf_values(self):
        assert normal_cdf(0.0) == pytest.approx(0.5)
        assert normal_cdf(1.96) == pytest.approx(0.975, abs=1e-4)
        assert normal_cdf(-1.96) == pytest.approx(0.025, abs=1e-4)

    def test_ks_small_for_normal_quantiles(self):
        # ideal normal sample: inverse-CDF grid
        n = 500
        grid = (np.arange(1, n + 1) - 0.5) / n
        values = [_normal_quantile(p) for p in grid]
        assert ks_against_normal(values) < 0.01

    def test_ks_large_for_shifted_sample(self):
        rng = np.random.default_rng(0)
        values = rng.normal(loc=3.0, size=500)
        assert ks_against_normal(values) > 0.5

    def test_ks_exact_small_case(self):
        # hand-checked three-point case
        d = ks_against_normal([-1.0, 0.0, 1.0])
        expected = 1.0 / 3.0 - normal_cdf(-1.0)
        assert d == pytest.approx(expected, abs=1e-12)

    def test_ks_needs_two(self):
        with pytest.raises(ValueError):
            ks_against_normal([0.0])


def _normal_quantile(p, lo=-10.0, hi=10.0):
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestHistogram:
    def test_counts_and_overflow(self):
        values = [-7.0, -0.25, 0.25, 0.25, 6.0]
        bins = histogram(values, 0.5, (-5.0, 5.0))
        assert bins[0] == (-math.inf, -5.0, 1)
        assert bins[-1] == (5.0, math.inf, 1)
        assert sum(n for _, _, n in bins) == 5
        inner = {(lo, hi): n for lo, hi, n in bins[1:-1]}
        assert inner[(-0.5, 0.0)] == 1
        assert inner[(0.0, 0.5)] == 2

    def test_bin_count(self):
        bins = histogram([], 0.5, (-5.0, 5.0))
        assert len(bins) == 20 + 2

    def test_guards(self):
        with pytest.raises(ValueError):
            histogram([0.0], 0.0, (-1.0, 1.0))
        with pytest.raises(ValueError):
            histogram([0.0], 0.5, (1.0, -1.0))


class TestConvergenceDiagnostic:
    def test_decreasing_distance_and_negative_slope(self):
        model = make_model("bernoulli_quadratic")
        cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=40_000, m=10,
                         m1=9, m2=1, c0=30.0)
        diag = convergence_diagnostic(model, cfg, replications=20,
                                      checkpoints=[50, 100, 200],
                                      master_seed=5, n_jobs=1)
        assert diag.checkpoints == [50, 100, 200]
        assert len(diag.mean_sq_distance) == 3
        assert diag.slope < 0.0

    def test_single_replication_returns_no_slope(self):
        model = make_model("bernoulli_quadratic")
        cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=8000, m=10,
                         m1=9, m2=1)
        diag = convergence_diagnostic(model, cfg, replications=1,
                                      checkpoints=[10, 100], master_seed=0,
                                      n_jobs=1)
        assert diag.slope is None
        assert len(diag.mean_sq_distance) == 2

    def test_budget_must_cover_checkpoints(self):
        model = make_model("bernoulli_quadratic")
        cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=2000, m=10,
                         m1=9, m2=1)
        with pytest.raises(ValueError):
            convergence_diagnostic(model, cfg, replications=2,
                                   checkpoints=[1000], master_seed=0,
                                   n_jobs=1)

    def test_checkpoint_validation(self):
        model = make_model("bernoulli_quadratic")
        cfg = smoke_cfg()
        with pytest.raises(ValueError):
            convergence_diagnostic(model, cfg, replications=2,
                                   checkpoints=[], master_seed=0)
        with pytest.raises(ValueError):
            convergence_diagnostic(model, cfg, replications=2,
                                   checkpoints=[0, 10], master_seed=0)
