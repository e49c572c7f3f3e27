"""Statistical layer: noise-scale estimation from the tail of the outcome
stream, CLT-based confidence intervals, normalized test statistics, the
asymptotic variance of the value estimator, and the treatment-vs-control
contrast."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Hard-coded two-sided normal quantiles; other levels are rejected.
Z_TABLE = {0.90: 1.645, 0.95: 1.96, 0.99: 2.576}


@dataclass(frozen=True)
class ConfidenceInterval:
    center: float
    half_width: float
    level: float
    sigma_hat: float
    total_draws: int
    spread: float

    @property
    def lo(self):
        return self.center - self.half_width

    @property
    def hi(self):
        return self.center + self.half_width

    def contains(self, value):
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class AteEstimate:
    treatment_mean: float
    control_mean: float
    difference: float
    se_difference: float


def sigma_hat(tail_outcomes):
    """Sample standard deviation (n-1 denominator) of the raw tail draws."""
    y = np.asarray(tail_outcomes, dtype=float)
    if y.size < 2:
        raise ValueError("need at least 2 outcomes for a standard deviation")
    return float(np.std(y, ddof=1))


def confidence_interval(mu_hat, sig, k, total_draws, level=0.95):
    """Interval mu_hat +- z * (k^2+1) * sig / (sqrt(T) * (k^2-1))."""
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    if total_draws < 1:
        raise ValueError("total_draws must be positive")
    if sig < 0.0:
        raise ValueError("sigma must be nonnegative")
    if level not in Z_TABLE:
        raise ValueError(f"unsupported level {level}; use one of "
                         f"{sorted(Z_TABLE)}")
    z = Z_TABLE[level]
    hw = z * (k * k + 1.0) * sig / (math.sqrt(total_draws) * (k * k - 1.0))
    return ConfidenceInterval(
        center=float(mu_hat), half_width=hw, level=level,
        sigma_hat=float(sig), total_draws=int(total_draws), spread=float(k))


def normalized_statistic(mu_hat, mu_true_at_theta_hat, sigma_star, k,
                         total_draws):
    """sqrt(T) * (k^2-1) / ((k^2+1) * sigma_star) * (mu_hat - mu_true).

    Asymptotically standard normal for the four-point method.
    """
    if sigma_star <= 0.0:
        raise ValueError("sigma_star must be positive")
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    scale = math.sqrt(total_draws) * (k * k - 1.0) / ((k * k + 1.0)
                                                      * sigma_star)
    return scale * (mu_hat - mu_true_at_theta_hat)


def recommend_split(m, k):
    """Variance-minimizing block split: m1 = k^2 m / (k^2+1), rounded.

    Round half up, then clamp so both halves stay >= 1.
    """
    if m < 2:
        raise ValueError("m must be at least 2 to split")
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    m1 = int(math.floor(k * k * m / (k * k + 1.0) + 0.5))
    m1 = min(max(m1, 1), m - 1)
    return m1, m - m1


def asymptotic_variance(m, m1, m2, k, sigma_star):
    """Limit of T * Var(value estimate): m/(k^2-1)^2 (k^4/m1 + 1/m2) sigma^2."""
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be positive")
    if m1 + m2 != m:
        raise ValueError("m1 + m2 must equal m")
    if sigma_star < 0.0:
        raise ValueError("sigma_star must be nonnegative")
    k2 = k * k
    return m / (k2 - 1.0) ** 2 * (k2 * k2 / m1 + 1.0 / m2) * sigma_star ** 2


def variance_inflation(k):
    """Variance ratio (k^2+1)^2/(k^2-1)^2 versus sampling at a known optimum."""
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    k2 = k * k
    return ((k2 + 1.0) / (k2 - 1.0)) ** 2


def ate_contrast(run_result, sig, k, control_outcomes):
    """Treatment-vs-control difference with an independent-sum standard error.

    Treatment side: the run's value estimate with its inflated asymptotic
    variance; control side: plain sample mean over i.i.d. control draws.
    """
    control = np.asarray(control_outcomes, dtype=float)
    if control.size == 0:
        raise ValueError("control outcomes must be nonempty")
    control_mean = float(control.mean())
    control_var = float(np.var(control, ddof=1)) if control.size > 1 else 0.0
    t_var = variance_inflation(k) * sig * sig / run_result.draws_used
    se = math.sqrt(t_var + control_var / control.size)
    return AteEstimate(
        treatment_mean=run_result.mu_hat,
        control_mean=control_mean,
        difference=run_result.mu_hat - control_mean,
        se_difference=se,
    )
