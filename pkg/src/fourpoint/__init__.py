"""Zeroth-order treatment-parameter optimization for adaptive A/B tests.

A four-point finite-difference stochastic ascent method with CLT-based
confidence intervals, two-point finite-difference baselines, and a Monte
Carlo replication harness for coverage and normality checks.
"""

from .estimators import (
    IterationEstimates,
    PerturbationSet,
    collect_pair_means,
    gradient_central_fd,
    gradient_forward_fd,
    gradient_four_point,
    perturbation_points,
    random_subset,
    sample_unit_sphere,
    value_central_fd,
    value_four_point,
)
from .harness import (
    ConvergenceDiagnostic,
    ReplicationRecord,
    ReplicationSummary,
    convergence_diagnostic,
    histogram,
    ks_against_normal,
    replicate,
)
from .inference import (
    AteEstimate,
    ConfidenceInterval,
    asymptotic_variance,
    ate_contrast,
    confidence_interval,
    normalized_statistic,
    recommend_split,
    sigma_hat,
    variance_inflation,
)
from .models import ControlModel, DomainError, OutcomeModel, make_model
from .optimizer import (
    AlgoConfig,
    ConfigurationError,
    RunResult,
    run_algorithm,
    run_central_fd,
    schedule_alpha,
    schedule_c,
    tail_average,
)

__version__ = "0.1.0"
