"""Monte Carlo replication engine: independent seeded runs of a configured
method, per-replication inference records, and aggregate coverage, moments,
histogram bins, and normality diagnostics."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import inference, optimizer

_SQRT2 = math.sqrt(2.0)

# Default histogram of the normalized statistic, matching a [-5, 5] window.
DEFAULT_BIN_WIDTH = 0.5
DEFAULT_BIN_RANGE = (-5.0, 5.0)


@dataclass(frozen=True)
class ReplicationRecord:
    rep_id: int
    seed: int
    theta_hat: np.ndarray
    mu_hat: float
    mu_true_at_theta_hat: float
    sigma_hat: float
    ci_lo: float
    ci_hi: float
    covered: bool
    normalized_stat: float
    draws_used: int


@dataclass(frozen=True)
class ReplicationSummary:
    method: str
    replications: int
    coverage_rate: float
    stat_mean: float
    stat_sd: float       # None when fewer than 2 replications
    ks_statistic: float  # None when fewer than 2 replications
    histogram: list      # (bin_lo, bin_hi, count) incl. overflow bins
    config: optimizer.AlgoConfig


def derive_seed(master_seed, rep_id):
    """Per-replication seed: first word of SeedSequence((master_seed, rep_id)).

    This bit-level scheme is the determinism contract: replication results
    depend only on (master_seed, rep_id), never on worker scheduling.
    """
    ss = np.random.SeedSequence(entropy=(int(master_seed), int(rep_id)))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_one(args):
    model, cfg, method, master_seed, rep_id, level = args
    seed = derive_seed(master_seed, rep_id)
    run_cfg = replace(cfg, seed=seed)
    if method == "four_point":
        result = optimizer.run_algorithm(model, run_cfg)
    elif method == "central_fd":
        result = optimizer.run_central_fd(model, run_cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    sig = inference.sigma_hat(result.tail_outcomes)
    ci = inference.confidence_interval(
        result.mu_hat, sig, cfg.k, result.draws_used, level)
    mu_true = model.true_mean(result.theta_hat)
    sigma_star = model.true_sd(model.theta_star())
    stat = inference.normalized_statistic(
        result.mu_hat, mu_true, sigma_star, cfg.k, result.draws_used)
    return ReplicationRecord(
        rep_id=rep_id,
        seed=seed,
        theta_hat=result.theta_hat,
        mu_hat=result.mu_hat,
        mu_true_at_theta_hat=mu_true,
        sigma_hat=sig,
        ci_lo=ci.lo,
        ci_hi=ci.hi,
        covered=ci.contains(mu_true),
        normalized_stat=stat,
        draws_used=result.draws_used,
    )


def replicate(model, cfg, method, replications, master_seed, level=0.95,
              n_jobs=0, bin_width=DEFAULT_BIN_WIDTH,
              bin_range=DEFAULT_BIN_RANGE):
    """Run independent replications and aggregate them.

    n_jobs: 0 = auto (cpu count), 1 = in-process, N = worker processes.
    Records are always ordered by rep_id and are independent of n_jobs.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    jobs = [(model, cfg, method, master_seed, r, level)
            for r in range(replications)]
    if n_jobs == 0:
        n_jobs = os.cpu_count() or 1
    if n_jobs == 1 or replications == 1:
        records = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            chunk = max(1, replications // (4 * n_jobs))
            records = list(pool.map(_run_one, jobs, chunksize=chunk))
    records.sort(key=lambda r: r.rep_id)

    stats = np.array([r.normalized_stat for r in records])
    coverage = sum(r.covered for r in records) / replications
    if replications >= 2:
        stat_sd = float(np.std(stats, ddof=1))
        ks = ks_against_normal(stats)
    else:
        stat_sd = None
        ks = None
    summary = ReplicationSummary(
        method=method,
        replications=replications,
        coverage_rate=coverage,
        stat_mean=float(stats.mean()),
        stat_sd=stat_sd,
        ks_statistic=ks,
        histogram=histogram(stats, bin_width, bin_range),
        config=cfg,
    )
    return summary, records


def normal_cdf(x):
    """Standard normal CDF via the error function."""
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


def ks_against_normal(values):
    """Kolmogorov-Smirnov sup-distance to the standard normal CDF."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n < 2:
        raise ValueError("need at least 2 values")
    cdf = np.array([normal_cdf(v) for v in x])
    grid = np.arange(1, n + 1) / n
    d_plus = np.max(grid - cdf)
    d_minus = np.max(cdf - (grid - 1.0 / n))
    return float(max(d_plus, d_minus))


def histogram(values, bin_width, bin_range):
    """Fixed-width bins over bin_range plus two overflow bins.

    Returns a list of (bin_lo, bin_hi, count); overflow bins use +-inf.
    """
    if bin_width <= 0.0:
        raise ValueError("bin_width must be positive")
    lo, hi = float(bin_range[0]), float(bin_range[1])
    if hi <= lo:
        raise ValueError("empty bin range")
    x = np.asarray(values, dtype=float)
    n_bins = int(math.ceil((hi - lo) / bin_width))
    edges = lo + bin_width * np.arange(n_bins + 1)
    edges[-1] = max(edges[-1], hi)
    counts, _ = np.histogram(x[(x >= lo) & (x <= edges[-1])], bins=edges)
    bins = [(-math.inf, lo, int(np.sum(x < lo)))]
    bins += [(float(edges[i]), float(edges[i + 1]), int(counts[i]))
             for i in range(n_bins)]
    bins.append((float(edges[-1]), math.inf, int(np.sum(x > edges[-1]))))
    return bins


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    checkpoints: list                 # iteration indices t
    mean_sq_distance: list            # Monte Carlo E||theta^t - theta*||^2
    slope: float                      # fitted log-log slope (None if R < 2)


def convergence_diagnostic(model, cfg, replications, checkpoints,
                           master_seed=0, n_jobs=0):
    """Estimate E||theta^t - theta*||^2 at checkpoints and its log-log slope.

    Requires a synthetic model exposing the true optimum; the run budget must
    cover the largest checkpoint.
    """
    checkpoints = sorted(int(t) for t in checkpoints)
    if not checkpoints or checkpoints[0] < 1:
        raise ValueError("checkpoints must be positive iteration indices")
    needed = 2 * cfg.m * checkpoints[-1]
    if cfg.total_budget < needed:
        raise ValueError(f"total_budget {cfg.total_budget} cannot reach "
                         f"iteration {checkpoints[-1]} (needs {needed})")
    theta_star = model.theta_star()
    jobs = [(model, cfg, master_seed, r, checkpoints, theta_star)
            for r in range(replications)]
    if n_jobs == 0:
        n_jobs = os.cpu_count() or 1
    if n_jobs == 1 or replications == 1:
        rows = [_checkpoint_distances(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(_checkpoint_distances, jobs))
    sq = np.array(rows)                       # (R, n_checkpoints)
    mean_sq = sq.mean(axis=0)
    slope = None
    if replications >= 2 and len(checkpoints) >= 2:
        slope = float(np.polyfit(np.log(checkpoints), np.log(mean_sq), 1)[0])
    return ConvergenceDiagnostic(
        checkpoints=checkpoints,
        mean_sq_distance=[float(v) for v in mean_sq],
        slope=slope,
    )


def _checkpoint_distances(args):
    model, cfg, master_seed, rep_id, checkpoints, theta_star = args
    run_cfg = replace(cfg, seed=derive_seed(master_seed, rep_id))
    result = optimizer.run_algorithm(model, run_cfg)
    out = []
    for t in checkpoints:
        diff = result.iterates[t - 1] - theta_star
        out.append(float(diff @ diff))
    return out
