"""Stochastic ascent loop over the treatment parameter.

Runs the four-point method or the two-point central-FD baseline on a
fixed draw budget T, with step sizes c0/t, perturbation widths c1*t^(-nu),
and a tail-averaged parameter recommendation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .estimators import (
    gradient_central_fd,
    gradient_four_point,
    random_subset,
    sample_unit_sphere,
    value_central_fd,
    value_four_point,
)

METHODS = ("four_point", "central_fd")


class ConfigurationError(ValueError):
    """Raised for inconsistent algorithm configurations."""


@dataclass(frozen=True)
class AlgoConfig:
    """All tunables of one optimization run."""

    dim: int
    theta0: np.ndarray
    total_budget: int
    k: float = 3.0
    m: int = 50
    m1: int = 45
    m2: int = 5
    nu: float = 0.2
    c0: float = 30.0
    c1: float = 1.0
    beta: float = 0.5
    seed: int = 0
    record_trajectory: bool = False
    allow_nu_outside_range: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "theta0",
            np.atleast_1d(np.asarray(self.theta0, dtype=float)))
        if self.dim < 1:
            raise ConfigurationError("dim must be positive")
        if self.theta0.shape != (self.dim,):
            raise ConfigurationError("theta0 shape does not match dim")
        if np.any(self.theta0 < 0) or np.any(self.theta0 > 1):
            raise ConfigurationError("theta0 must lie in [0,1]^dim")
        if self.total_budget < 1:
            raise ConfigurationError("total_budget must be positive")
        if self.k <= 1.0:
            raise ConfigurationError("k must exceed 1")
        if self.m1 < 1 or self.m2 < 1 or self.m1 + self.m2 != self.m:
            raise ConfigurationError("need m1, m2 >= 1 with m1 + m2 = m")
        if not 1.0 / 6.0 < self.nu < 0.25:
            if self.allow_nu_outside_range:
                warnings.warn(
                    f"nu={self.nu} outside (1/6, 1/4); CLT guarantees "
                    "do not apply", stacklevel=2)
            else:
                raise ConfigurationError("nu must lie in (1/6, 1/4)")
        if self.c0 <= 0 or self.c1 <= 0:
            raise ConfigurationError("c0 and c1 must be positive")
        if not 0.0 < self.beta <= 1.0:
            raise ConfigurationError("beta must lie in (0, 1]")


@dataclass(frozen=True)
class RunResult:
    """Outputs of one optimization run."""

    theta_hat: np.ndarray
    mu_hat: float
    iterations: int
    draws_used: int
    tail_outcomes: np.ndarray     # raw draws with global index >= tail_start
    tail_start: int               # 1-based global draw index of tail[0]
    iterates: np.ndarray          # (iterations, dim) post-update thetas
    clipped_iterations: int       # iterations whose evaluation points left the box
    trajectory: object = None     # optional (mu_hat_t, grad_norm_t) arrays


def schedule_alpha(cfg, t):
    """Step size c0/t for iteration index t >= 1."""
    if t < 1:
        raise IndexError("schedule index starts at 1")
    return cfg.c0 / t


def schedule_c(cfg, t):
    """Perturbation half width c1 * t^(-nu) for iteration index t >= 1."""
    if t < 1:
        raise IndexError("schedule index starts at 1")
    return cfg.c1 * t ** (-cfg.nu)


def tail_average(iterates, beta):
    """Mean of the last ceil(beta * n) rows."""
    iterates = np.asarray(iterates, dtype=float)
    if iterates.size == 0:
        raise ValueError("empty trajectory")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    n = iterates.shape[0]
    start = n - int(np.ceil(beta * n))
    return iterates[start:].mean(axis=0)


def run_algorithm(model, cfg):
    """Full four-point run: Algorithm-1 loop plus tail-averaged output."""
    return _run(model, cfg, "four_point")


def run_central_fd(model, cfg):
    """Two-point central-FD baseline on the identical budget and schedules."""
    return _run(model, cfg, "central_fd")


def _run(model, cfg, method):
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}")
    if model.dim != cfg.dim:
        raise ConfigurationError("model dimension does not match config")
    two_m = 2 * cfg.m
    n_iter = cfg.total_budget // two_m
    if n_iter < 1:
        raise ConfigurationError("total_budget must be at least 2*m")

    rng = np.random.default_rng(cfg.seed)
    d, k, m1, m2, m = cfg.dim, cfg.k, cfg.m1, cfg.m2, cfg.m
    theta = cfg.theta0.copy()
    iterates = np.empty((n_iter, d))
    mu_sum = 0.0
    clipped = 0

    draws_used = two_m * n_iter
    tail_start = cfg.total_budget // 2 + 1      # 1-based draw index
    tail = np.empty(max(draws_used - tail_start + 1, 0))
    tail_fill = 0

    traj_mu = np.empty(n_iter) if cfg.record_trajectory else None
    traj_gn = np.empty(n_iter) if cfg.record_trajectory else None

    block = np.empty(two_m)
    for t in range(n_iter):
        step = t + 1
        alpha = cfg.c0 / step
        c = cfg.c1 * step ** (-cfg.nu)
        w = sample_unit_sphere(rng, d)
        # Perturbation points are NOT projected: the estimator formulas are
        # only unbiased at the exact points theta +- c*w, theta +- k*c*w, and
        # projecting them wrecks the CLT.  The models extend beyond the box;
        # only the iterate itself is kept feasible.
        step_v = c * w
        p_plus = theta + step_v
        p_minus = theta - step_v
        p_pp = theta + k * step_v
        p_mm = theta - k * step_v
        reach = k * c * np.abs(w)
        if np.any(theta + reach > 1.0) or np.any(theta - reach < 0.0):
            clipped += 1

        if method == "four_point":
            sub1 = random_subset(rng, m1)
            yp = model.draw(p_plus, rng, m1, extended=True)
            ym = model.draw(p_minus, rng, m1, extended=True)
            sub2 = random_subset(rng, m2)
            ypp = model.draw(p_pp, rng, m2, extended=True)
            ymm = model.draw(p_mm, rng, m2, extended=True)
            mp, mm_ = yp.mean(), ym.mean()
            mpp, mmm = ypp.mean(), ymm.mean()
            g = gradient_four_point(mp, mm_, mpp, mmm, k, c, w)
            mu_t = value_four_point(mp, mm_, mpp, mmm, k)
            mask1 = np.zeros(2 * m1, dtype=bool)
            mask1[sub1] = True
            block[:2 * m1][mask1] = yp
            block[:2 * m1][~mask1] = ym
            mask2 = np.zeros(2 * m2, dtype=bool)
            mask2[sub2] = True
            block[2 * m1:][mask2] = ypp
            block[2 * m1:][~mask2] = ymm
        else:
            sub = random_subset(rng, m)
            yp = model.draw(p_plus, rng, m, extended=True)
            ym = model.draw(p_minus, rng, m, extended=True)
            mp, mm_ = yp.mean(), ym.mean()
            g = gradient_central_fd(mp, mm_, c, w)
            mu_t = value_central_fd(mp, mm_)
            mask = np.zeros(two_m, dtype=bool)
            mask[sub] = True
            block[mask] = yp
            block[~mask] = ym

        # record raw draws whose 1-based global index falls in the tail
        lo = two_m * t + 1
        if lo + two_m - 1 >= tail_start:
            skip = max(tail_start - lo, 0)
            chunk = block[skip:]
            tail[tail_fill:tail_fill + chunk.size] = chunk
            tail_fill += chunk.size

        theta = np.clip(theta + alpha * g, 0.0, 1.0)
        iterates[t] = theta
        mu_sum += mu_t
        if cfg.record_trajectory:
            traj_mu[t] = mu_t
            traj_gn[t] = np.sqrt(g @ g)

    assert tail_fill == tail.size
    trajectory = None
    if cfg.record_trajectory:
        trajectory = {"mu_hat_t": traj_mu, "grad_norm": traj_gn}
    return RunResult(
        theta_hat=tail_average(iterates, cfg.beta),
        mu_hat=mu_sum / n_iter,
        iterations=n_iter,
        draws_used=draws_used,
        tail_outcomes=tail,
        tail_start=tail_start,
        iterates=iterates,
        clipped_iterations=clipped,
        trajectory=trajectory,
    )


def with_overrides(cfg, **kwargs):
    """Return a copy of cfg with the given fields replaced."""
    return replace(cfg, **kwargs)
