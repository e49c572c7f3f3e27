"""Tests for the synthetic outcome and control models."""

import math

import numpy as np
import pytest

from fourpoint import ControlModel, DomainError, make_model
from fourpoint.models import DEFAULT_QUAD, MODEL_FAMILIES


def quad_value(x, coeffs=DEFAULT_QUAD):
    a, b, c = coeffs
    return a * x * x + b * x + c


class TestQuadraticFamilies:
    def test_true_mean_matches_polynomial(self):
        model = make_model("bernoulli_quadratic")
        for x in np.linspace(0.0, 1.0, 11):
            assert model.true_mean([x]) == pytest.approx(quad_value(x),
                                                         abs=1e-15)

    def test_custom_coefficients(self):
        model = make_model("bernoulli_quadratic", quad=(-1.0, 0.8, 0.2))
        assert model.true_mean([0.5]) == pytest.approx(-0.25 + 0.4 + 0.2)
        assert model.theta_star()[0] == pytest.approx(0.4)

    def test_theta_star_default(self):
        # argmax of the default concave quadratic: -b / (2a)
        model = make_model("bernoulli_quadratic")
        expected = -DEFAULT_QUAD[1] / (2.0 * DEFAULT_QUAD[0])
        assert model.theta_star()[0] == pytest.approx(expected, abs=1e-12)
        assert model.theta_star()[0] == pytest.approx(0.4294118, abs=1e-6)

    def test_optimal_value_and_sd(self):
        model = make_model("bernoulli_quadratic")
        theta_star = model.theta_star()
        mu_star = model.true_mean(theta_star)
        assert mu_star == pytest.approx(0.0144184, abs=1e-6)
        sd_star = model.true_sd(theta_star)
        assert sd_star == pytest.approx(math.sqrt(mu_star * (1 - mu_star)),
                                        abs=1e-12)
        assert sd_star == pytest.approx(0.119208, abs=1e-5)

    def test_convex_quadratic_has_no_interior_max(self):
        model = make_model("bernoulli_quadratic", quad=(1.0, 0.0, 0.1))
        with pytest.raises(ValueError):
            model.theta_star()


class TestLogistic6d:
    def test_value_at_center(self):
        model = make_model("logistic_6d")
        center = np.full(6, 1.0 / 3.0)
        assert model.true_mean(center) == pytest.approx(
            1.0 / (1.0 + math.exp(2.0)), abs=1e-12)

    def test_center_is_global_max(self):
        model = make_model("logistic_6d")
        center = np.full(6, 1.0 / 3.0)
        best = model.true_mean(center)
        rng = np.random.default_rng(7)
        for _ in range(100):
            theta = rng.random(6)
            assert model.true_mean(theta) <= best

    def test_theta_star(self):
        model = make_model("logistic_6d")
        np.testing.assert_allclose(model.theta_star(), np.full(6, 1.0 / 3.0))

    def test_requires_dim_six(self):
        with pytest.raises(ValueError):
            make_model("logistic_6d", dim=2)


class TestSampling:
    @pytest.mark.parametrize("family", ["bernoulli_quadratic",
                                        "pareto_quadratic",
                                        "t_noise_quadratic"])
    def test_draw_mean_matches_true_mean(self, family):
        model = make_model(family)
        rng = np.random.default_rng(11)
        theta = np.array([0.3])
        n = 200_000
        y = model.draw(theta, rng, n)
        mu = model.true_mean(theta)
        sd = model.true_sd(theta)
        assert y.mean() == pytest.approx(mu, abs=5 * sd / math.sqrt(n))

    def test_gaussian_constant_mean(self):
        model = make_model("gaussian_constant", mean=0.0, sd=1.0)
        rng = np.random.default_rng(3)
        y = model.draw(np.array([0.5]), rng, 10**6)
        assert abs(y.mean()) <= 0.004   # 3 standard errors at sd=1

    def test_pareto_sd(self):
        model = make_model("pareto_quadratic")
        theta = np.array([0.5])
        mu = model.true_mean(theta)
        rng = np.random.default_rng(5)
        y = model.draw(theta, rng, 500_000)
        # Pareto(3) has a finite but heavy-tailed variance; loose tolerance
        assert y.std() == pytest.approx(model.true_sd(theta), rel=0.15)
        assert model.true_sd(theta) == pytest.approx(mu / math.sqrt(3.0),
                                                     abs=1e-12)

    def test_t_noise_sd(self):
        model = make_model("t_noise_quadratic")
        assert model.true_sd([0.5]) == pytest.approx(math.sqrt(3.0))

    def test_scalar_draw(self):
        model = make_model("bernoulli_quadratic")
        rng = np.random.default_rng(0)
        y = model.draw(np.array([0.5]), rng)
        assert isinstance(y, float)
        assert y in (0.0, 1.0)


class TestExtendedDomain:
    """Outside [0,1]^d the mean extension must stay exact: the
    finite-difference estimators are unbiased only if E[Y] = mu everywhere."""

    def test_domain_error_without_extension(self):
        model = make_model("bernoulli_quadratic")
        rng = np.random.default_rng(0)
        with pytest.raises(DomainError):
            model.draw(np.array([1.2]), rng, 10)
        with pytest.raises(DomainError):
            model.true_mean(np.array([-0.1]))

    def test_shape_mismatch(self):
        model = make_model("bernoulli_quadratic")
        with pytest.raises(DomainError):
            model.true_mean(np.array([0.5, 0.5]))

    def test_bernoulli_negative_mean_region(self):
        model = make_model("bernoulli_quadratic")
        theta = np.array([-1.0])
        mu = quad_value(-1.0)
        assert mu < 0.0
        rng = np.random.default_rng(21)
        y = model.draw(theta, rng, 100_000, extended=True)
        assert y.mean() == pytest.approx(mu, abs=1e-12)

    def test_bernoulli_mean_above_one(self):
        model = make_model("bernoulli_quadratic", quad=(0.0, 0.0, 1.3))
        rng = np.random.default_rng(22)
        y = model.draw(np.array([5.0]), rng, 1000, extended=True)
        assert y.mean() == pytest.approx(1.3, abs=1e-12)

    def test_bernoulli_shifted_support(self):
        model = make_model("bernoulli_quadratic")
        theta = np.array([1.5])
        mu = model._mean_at(np.array([1.5]))
        rng = np.random.default_rng(23)
        y = model.draw(theta, rng, 1000, extended=True)
        if 0.0 <= mu <= 1.0:
            assert set(np.unique(y)) <= {0.0, 1.0}
        p = min(max(mu, 0.0), 1.0)
        expected = {mu - p, 1.0 + mu - p}
        assert set(np.round(np.unique(y), 12)) <= set(
            np.round(sorted(expected), 12))

    def test_pareto_nonpositive_mean_is_point_mass(self):
        model = make_model("pareto_quadratic")
        theta = np.array([2.0])
        mu = model._mean_at(theta)
        assert mu < 0.0
        rng = np.random.default_rng(24)
        y = model.draw(theta, rng, 100, extended=True)
        np.testing.assert_allclose(y, mu)

    def test_pareto_positive_mean_unchanged(self):
        model = make_model("pareto_quadratic")
        rng1 = np.random.default_rng(25)
        rng2 = np.random.default_rng(25)
        theta = np.array([0.5])
        y_in = model.draw(theta, rng1, 1000)
        y_ext = model.draw(theta, rng2, 1000, extended=True)
        np.testing.assert_array_equal(y_in, y_ext)

    def test_logistic_extension_is_plain_bernoulli(self):
        # the logistic mean is always a valid probability, even far outside
        model = make_model("logistic_6d")
        rng = np.random.default_rng(26)
        y = model.draw(np.full(6, 4.0), rng, 1000, extended=True)
        assert set(np.unique(y)) <= {0.0, 1.0}


class TestControlModel:
    def test_bernoulli_mean(self):
        control = ControlModel(mean=0.2, family="bernoulli")
        rng = np.random.default_rng(9)
        y = control.draw(rng, 100_000)
        assert y.mean() == pytest.approx(0.2, abs=0.005)

    def test_gaussian_draw(self):
        control = ControlModel(mean=1.0, sd=2.0)
        rng = np.random.default_rng(10)
        y = control.draw(rng, 100_000)
        assert y.mean() == pytest.approx(1.0, abs=0.03)
        assert y.std() == pytest.approx(2.0, rel=0.02)

    def test_validation(self):
        with pytest.raises(ValueError):
            ControlModel(mean=1.5, family="bernoulli")
        with pytest.raises(ValueError):
            ControlModel(mean=0.0, sd=-1.0)
        with pytest.raises(ValueError):
            ControlModel(mean=0.0, family="poisson")


class TestFactory:
    def test_unknown_family(self):
        with pytest.raises(ValueError):
            make_model("cauchy_quadratic")

    def test_default_dims(self):
        assert make_model("logistic_6d").dim == 6
        for family in MODEL_FAMILIES:
            if family != "logistic_6d":
                assert make_model(family).dim == 1
