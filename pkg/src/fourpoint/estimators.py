"""One-iteration geometry and statistics: sphere directions, perturbation
points, randomized subset assignment, sample means, and the four-point and
two-point finite-difference gradient/value estimators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PerturbationSet:
    """The four evaluation points around theta, clipped to the unit box."""

    theta_plus: np.ndarray
    theta_minus: np.ndarray
    theta_pp: np.ndarray
    theta_mm: np.ndarray
    direction: np.ndarray
    half_width: float
    spread: float


@dataclass(frozen=True)
class IterationEstimates:
    mean_plus: float
    mean_minus: float
    mean_pp: float
    mean_mm: float
    gradient: np.ndarray
    mu_hat: float
    draws_used: int


def sample_unit_sphere(rng, d):
    """Uniform direction on the unit sphere in R^d (Gaussian normalize)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    while True:
        w = rng.standard_normal(d)
        norm = np.sqrt(w @ w)
        if norm > 0.0:
            return w / norm


def perturbation_points(theta, w, c, k):
    """Points theta +- c*w and theta +- k*c*w, componentwise clipped to [0,1].

    The gradient/value formulas downstream always use the requested c, even
    when clipping shortened a step near the boundary.
    """
    if c <= 0.0:
        raise ValueError("half width c must be positive")
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    theta = np.asarray(theta, dtype=float)
    step = c * w
    return PerturbationSet(
        theta_plus=np.clip(theta + step, 0.0, 1.0),
        theta_minus=np.clip(theta - step, 0.0, 1.0),
        theta_pp=np.clip(theta + k * step, 0.0, 1.0),
        theta_mm=np.clip(theta - k * step, 0.0, 1.0),
        direction=w,
        half_width=float(c),
        spread=float(k),
    )


def random_subset(rng, m_i):
    """Uniform m_i-element subset of {0, ..., 2*m_i - 1}.

    Partial Fisher-Yates on the index list: the first m_i swap positions of a
    full shuffle determine the subset.  This randomization design is fixed
    here once and for all.
    """
    if m_i < 1:
        raise ValueError("subset half-size must be >= 1")
    n = 2 * m_i
    idx = list(range(n))
    u = rng.random(m_i)
    for i in range(m_i):
        j = i + int(u[i] * (n - i))
        idx[i], idx[j] = idx[j], idx[i]
    return np.array(idx[:m_i])


def collect_pair_means(model, point_a, point_b, m_i, rng):
    """Draw 2*m_i outcomes split between two points via random_subset.

    Returns (mean_a, mean_b, outcomes, assigned_a): ``outcomes`` holds the
    raw draws in stream order and ``assigned_a`` marks which of them came
    from point_a.  The raw stream is what the variance estimator consumes.
    """
    subset = random_subset(rng, m_i)
    ya = model.draw(point_a, rng, m_i)
    yb = model.draw(point_b, rng, m_i)
    outcomes = np.empty(2 * m_i)
    assigned_a = np.zeros(2 * m_i, dtype=bool)
    assigned_a[subset] = True
    outcomes[assigned_a] = ya
    outcomes[~assigned_a] = yb
    return float(ya.mean()), float(yb.mean()), outcomes, assigned_a


def gradient_four_point(mean_plus, mean_minus, mean_pp, mean_mm, k, c, w):
    """Directional gradient estimate with fourth-order deterministic error."""
    if c <= 0.0:
        raise ValueError("half width c must be positive")
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    k3 = k ** 3
    scale = (-mean_pp + k3 * mean_plus - k3 * mean_minus + mean_mm) \
        / (2.0 * k * (k * k - 1.0) * c)
    return scale * w


def value_four_point(mean_plus, mean_minus, mean_pp, mean_mm, k):
    """Function-value estimate with third-order deterministic error."""
    if k <= 1.0:
        raise ValueError("spread k must exceed 1")
    k2 = k * k
    return (-mean_pp + k2 * mean_plus + k2 * mean_minus - mean_mm) \
        / (2.0 * (k2 - 1.0))


def gradient_central_fd(mean_plus, mean_minus, c, w):
    """Classical central finite-difference gradient (second-order error)."""
    if c <= 0.0:
        raise ValueError("half width c must be positive")
    return ((mean_plus - mean_minus) / (2.0 * c)) * w


def value_central_fd(mean_plus, mean_minus):
    """Midpoint value estimate; carries an O(c^2) curvature bias."""
    return 0.5 * (mean_plus + mean_minus)


def gradient_forward_fd(mean_plus, mean_center, c, w):
    """Classical forward finite-difference gradient (first-order error)."""
    if c <= 0.0:
        raise ValueError("half width c must be positive")
    return ((mean_plus - mean_center) / c) * w
