"""Synthetic stochastic outcome models for the treatment and control arms.

Each treatment model exposes a noisy oracle ``draw`` plus analytic
``true_mean`` / ``true_sd`` diagnostics that a real experiment would not
have.  Models are immutable; all randomness comes from the caller's
``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Click-through-rate quadratic calibrated from A/B test data (default model).
DEFAULT_QUAD = (-0.02125, 0.01825, 0.0105)

MODEL_FAMILIES = (
    "bernoulli_quadratic",
    "pareto_quadratic",
    "t_noise_quadratic",
    "logistic_6d",
    "gaussian_constant",
)


class DomainError(ValueError):
    """Raised when a treatment parameter falls outside [0, 1]^d."""


def _check_theta(theta, dim):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (dim,):
        raise DomainError(f"theta has shape {theta.shape}, expected ({dim},)")
    if np.any(theta < 0.0) or np.any(theta > 1.0):
        raise DomainError(f"theta {theta} outside [0,1]^{dim}")
    return theta


@dataclass(frozen=True)
class OutcomeModel:
    """Stochastic oracle Y(theta) = mu(theta) + sd(theta) * noise on [0,1]^d."""

    kind: str
    dim: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_FAMILIES:
            raise ValueError(f"unknown model family {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.kind == "logistic_6d" and self.dim != 6:
            raise ValueError("logistic_6d requires dim=6")

    # -- analytic quantities -------------------------------------------------

    def _quad_coeffs(self):
        return self.params.get("quad", DEFAULT_QUAD)

    def _mean_at(self, theta):
        """Raw mean function, defined on all of R^d (no domain check)."""
        if self.kind in ("bernoulli_quadratic", "pareto_quadratic",
                         "t_noise_quadratic"):
            a, b, c = self._quad_coeffs()
            x = theta[0]
            return a * x * x + b * x + c
        if self.kind == "logistic_6d":
            z = -0.5 * np.sum((theta - 1.0 / 3.0) ** 2) - 2.0
            return 1.0 / (1.0 + math.exp(-z))
        if self.kind == "gaussian_constant":
            return float(self.params.get("mean", 0.0))
        raise AssertionError(self.kind)

    def true_mean(self, theta):
        theta = _check_theta(theta, self.dim)
        return self._mean_at(theta)

    def true_sd(self, theta):
        theta = _check_theta(theta, self.dim)
        mu = self.true_mean(theta)
        if self.kind in ("bernoulli_quadratic", "logistic_6d"):
            return math.sqrt(mu * (1.0 - mu))
        if self.kind == "pareto_quadratic":
            # shape alpha=3, scale 2mu/3: var = 3*scale^2/4
            scale = 2.0 * mu / 3.0
            return scale * math.sqrt(3.0) / 2.0
        if self.kind == "t_noise_quadratic":
            # unscaled t noise with df=3 has variance df/(df-2) = 3
            df = float(self.params.get("df", 3.0))
            return math.sqrt(df / (df - 2.0))
        if self.kind == "gaussian_constant":
            return float(self.params.get("sd", 1.0))
        raise AssertionError(self.kind)

    def theta_star(self):
        """Argmax of the true mean (synthetic-model diagnostic)."""
        if self.kind in ("bernoulli_quadratic", "pareto_quadratic",
                         "t_noise_quadratic"):
            a, b, _ = self._quad_coeffs()
            if a >= 0:
                raise ValueError("quadratic is not concave; no interior max")
            return np.clip(np.array([-b / (2.0 * a)]), 0.0, 1.0)
        if self.kind == "logistic_6d":
            return np.full(6, 1.0 / 3.0)
        if self.kind == "gaussian_constant":
            # mean is flat; any point is optimal
            return np.full(self.dim, 0.5)
        raise AssertionError(self.kind)

    # -- sampling ------------------------------------------------------------

    def draw(self, theta, rng, size=None, extended=False):
        """Draw independent outcomes at theta; scalar if size is None.

        ``extended=True`` evaluates the model beyond [0,1]^d, as needed for
        unprojected perturbation points.  The extension is mean-faithful:
        E[Y(theta)] = mu(theta) for every theta in R^d, because the
        finite-difference estimators are only unbiased under that property.
        Where the raw mean leaves the family's valid parameter range
        (Bernoulli probability outside [0,1], Pareto scale nonpositive),
        noise is drawn at the clamped parameter and the draw is shifted by
        the clamp residual.
        """
        if extended:
            theta = np.atleast_1d(np.asarray(theta, dtype=float))
        else:
            theta = _check_theta(theta, self.dim)
        n = 1 if size is None else int(size)
        mu = self._mean_at(theta)
        if self.kind in ("bernoulli_quadratic", "logistic_6d"):
            p = min(max(mu, 0.0), 1.0) if extended else mu
            out = (rng.random(n) < p).astype(float)
            if p != mu:
                out += mu - p
        elif self.kind == "pareto_quadratic":
            # inverse CDF of Pareto(shape=3, scale=2mu/3): x_m * U^(-1/3)
            scale = 2.0 * max(mu, 0.0) / 3.0 if extended else 2.0 * mu / 3.0
            out = scale * rng.random(n) ** (-1.0 / 3.0)
            if extended and mu <= 0.0:
                out += mu   # degenerate point mass with the exact mean
        elif self.kind == "t_noise_quadratic":
            df = float(self.params.get("df", 3.0))
            out = mu + rng.standard_t(df, n)
        elif self.kind == "gaussian_constant":
            sd = float(self.params.get("sd", 1.0))
            out = mu + sd * rng.standard_normal(n)
        else:
            raise AssertionError(self.kind)
        return float(out[0]) if size is None else out


CONTROL_FAMILIES = ("bernoulli", "gaussian")


@dataclass(frozen=True)
class ControlModel:
    """Single control arm with fixed mean and noise family."""

    mean: float
    sd: float = 0.0
    family: str = "gaussian"

    def __post_init__(self):
        if self.family not in CONTROL_FAMILIES:
            raise ValueError(f"unknown control family {self.family!r}")
        if self.sd < 0:
            raise ValueError("sd must be nonnegative")
        if self.family == "bernoulli" and not 0.0 <= self.mean <= 1.0:
            raise ValueError("bernoulli control mean must lie in [0,1]")

    def draw(self, rng, size=None):
        n = 1 if size is None else int(size)
        if self.family == "bernoulli":
            out = (rng.random(n) < self.mean).astype(float)
        else:
            out = self.mean + self.sd * rng.standard_normal(n)
        return float(out[0]) if size is None else out


def make_model(family, dim=None, **params):
    """Build an OutcomeModel with family-appropriate defaults."""
    if dim is None:
        dim = 6 if family == "logistic_6d" else 1
    return OutcomeModel(kind=family, dim=dim, params=params)
