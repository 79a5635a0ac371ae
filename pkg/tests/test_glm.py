import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from applepath import Dataset, Family
from applepath import glm
from applepath.exceptions import (
    DegenerateResponseError, NumericalOverflowError, ResponseDomainError, SaturatedObservationError,
)

from oracles import random_glm


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=["logistic", "poisson"])
def small(request, rng):
    X, y = random_glm(rng, request.param, 20, 5)
    return Dataset(X, y, request.param)


class TestDataset:
    def test_family_coercion(self):
        d = Dataset(np.zeros((2, 1)), np.array([0.0, 1.0]), "Logistic")
        assert d.family is Family.LOGISTIC
        assert (d.n, d.p) == (2, 1)

    def test_arrays_are_read_only(self):
        d = Dataset(np.zeros((2, 1)), np.array([0.0, 1.0]), "logistic")
        with pytest.raises(ValueError):
            d.X[0, 0] = 1.0

    def test_augmented_has_leading_ones(self, small):
        Xt = small.augmented()
        assert Xt.shape == (small.n, small.p + 1)
        np.testing.assert_array_equal(Xt[:, 0], 1.0)

    @pytest.mark.parametrize("family, bad", [("logistic", 2.0), ("logistic", 0.5), ("poisson", -1.0), ("poisson", 1.5)])
    def test_response_domain(self, family, bad):
        y = np.array([0.0, 1.0, bad])
        with pytest.raises(ResponseDomainError, match="row 2"):
            Dataset(np.ones((3, 1)), y, family)

    def test_non_finite_rejected(self):
        X = np.array([[1.0], [np.nan]])
        with pytest.raises(ValueError):
            Dataset(X, np.array([0.0, 1.0]), "logistic")


class TestNegLogLikelihood:
    def test_logistic_at_zero(self, rng):
        X, y = random_glm(rng, "logistic", 15, 3)
        assert glm.neg_log_likelihood(Dataset(X, y, "logistic"), np.zeros(4)) == pytest.approx(np.log(2.0), abs=1e-15)

    def test_poisson_at_zero(self, rng):
        X, y = random_glm(rng, "poisson", 15, 3)
        assert glm.neg_log_likelihood(Dataset(X, y, "poisson"), np.zeros(4)) == 1.0

    def test_hand_value(self):
        d = Dataset(np.array([[1.0]]), np.array([1.0]), "logistic")
        assert glm.neg_log_likelihood(d, np.array([0.0, np.log(3.0)])) == pytest.approx(np.log(4.0 / 3.0), rel=1e-14)

    def test_logistic_is_stable_for_large_theta(self):
        d = Dataset(np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), "logistic")
        val = glm.neg_log_likelihood(d, np.array([0.0, 800.0]))
        assert val == pytest.approx(400.0)

    def test_poisson_overflow_is_reported(self):
        d = Dataset(np.array([[1.0]]), np.array([1.0]), "poisson")
        with pytest.raises(NumericalOverflowError):
            glm.neg_log_likelihood(d, np.array([0.0, 800.0]))

    def test_beta_length_checked(self, small):
        with pytest.raises(ValueError):
            glm.neg_log_likelihood(small, np.zeros(small.p))

    def test_convex_along_segments(self, small, rng):
        for _ in range(50):
            a, b = rng.normal(0, 0.5, (2, small.p + 1))
            mid = glm.neg_log_likelihood(small, 0.5 * (a + b))
            ends = 0.5 * (glm.neg_log_likelihood(small, a) + glm.neg_log_likelihood(small, b))
            assert mid <= ends + 1e-12


class TestDerivatives:
    def test_score_at_zero(self, small):
        mu0 = 0.5 if small.family is Family.LOGISTIC else 1.0
        expected = small.augmented().T @ (small.y - mu0) / small.n
        np.testing.assert_allclose(glm.score(small, np.zeros(small.p + 1)), expected, rtol=1e-14)

    def test_score_matches_finite_differences(self, rng):
        for i in range(100):
            family = ("logistic", "poisson")[i % 2]
            X, y = random_glm(rng, family, 20, 5)
            d = Dataset(X, y, family)
            beta = 0.3 * rng.standard_normal(6)
            h = 1e-6
            fd = [(glm.neg_log_likelihood(d, beta - h * e) - glm.neg_log_likelihood(d, beta + h * e)) / (2 * h)
                  for e in np.eye(6)]
            sc = glm.score(d, beta)
            assert np.max(np.abs(fd - sc)) <= 1e-6 * max(np.max(np.abs(sc)), 1e-3)

    def test_hessian_matches_score_jacobian(self, small, rng):
        beta = 0.3 * rng.standard_normal(small.p + 1)
        h = 1e-5
        jac = np.column_stack([(glm.score(small, beta - h * e) - glm.score(small, beta + h * e)) / (2 * h)
                               for e in np.eye(small.p + 1)])
        H = glm.hessian(small, beta)
        np.testing.assert_allclose(jac, H, atol=1e-5 * np.max(np.abs(H)))

    def test_weights_at_zero(self, small):
        w = glm.weight_diag(small, np.zeros(small.p + 1))
        np.testing.assert_array_equal(w, 0.25 if small.family is Family.LOGISTIC else 1.0)

    def test_logistic_weight_hand_value(self):
        d = Dataset(np.array([[1.0]]), np.array([1.0]), "logistic")
        assert glm.weight_diag(d, np.array([0.0, np.log(3.0)]))[0] == pytest.approx(0.1875, rel=1e-14)

    def test_third_at_zero(self, small):
        t = glm.third_diag(small, np.zeros(small.p + 1))
        np.testing.assert_array_equal(t, 0.0 if small.family is Family.LOGISTIC else 1.0)

    def test_third_is_derivative_of_weight(self, small, rng):
        theta = rng.normal(0, 1.5, 30)
        h = 1e-5
        fd = (glm.variance(small.family, theta + h) - glm.variance(small.family, theta - h)) / (2 * h)
        np.testing.assert_allclose(glm.third(small.family, theta), fd, rtol=1e-5, atol=1e-12)

    @given(st.lists(st.floats(-30, 30), min_size=1, max_size=20))
    def test_logistic_third_is_odd(self, thetas):
        t = np.array(thetas)
        np.testing.assert_allclose(glm.third("logistic", t), -glm.third("logistic", -t), atol=1e-15)

    @given(st.lists(st.floats(-30, 30), min_size=1, max_size=20))
    def test_logistic_weights_bounded(self, thetas):
        v = glm.variance("logistic", np.array(thetas))
        assert np.all(v > 0.0) and np.all(v <= 0.25)


class TestWorkingResponse:
    def test_logistic_at_zero(self, rng):
        X, y = random_glm(rng, "logistic", 15, 3)
        d = Dataset(X, y, "logistic")
        np.testing.assert_allclose(glm.working_response(d, np.zeros(4)), 4.0 * (y - 0.5))

    def test_poisson_at_zero(self, rng):
        X, y = random_glm(rng, "poisson", 15, 3)
        d = Dataset(X, y, "poisson")
        np.testing.assert_allclose(glm.working_response(d, np.zeros(4)), y - 1.0)

    def test_exact_fit_returns_theta(self):
        X = np.array([[0.0], [np.log(2.0)], [np.log(3.0)]])
        d = Dataset(X, np.array([1.0, 2.0, 3.0]), "poisson")
        beta = np.array([0.0, 1.0])
        np.testing.assert_allclose(glm.working_response(d, beta), X[:, 0], atol=1e-14)

    def test_underflowed_weight(self):
        d = Dataset(np.array([[1.0]]), np.array([1.0]), "logistic")
        with pytest.raises(SaturatedObservationError):
            glm.working_response(d, np.array([0.0, 800.0]))


class TestNullModel:
    def test_logistic_intercept(self):
        y = np.array([1.0, 1.0, 1.0, 0.0])
        assert glm.null_intercept("logistic", y) == pytest.approx(np.log(3.0))

    def test_poisson_intercept(self):
        assert glm.null_intercept("poisson", np.array([1.0, 2.0, 3.0])) == pytest.approx(np.log(2.0))

    @pytest.mark.parametrize("family, y", [("logistic", [1.0, 1.0]), ("logistic", [0.0, 0.0]), ("poisson", [0.0, 0.0])])
    def test_degenerate(self, family, y):
        with pytest.raises(DegenerateResponseError):
            glm.null_intercept(family, np.array(y))

    def test_deviance_zero_at_saturated_fit(self):
        y = np.array([0.0, 1.0, 4.0])
        with np.errstate(divide="ignore"):
            theta = np.log(np.where(y > 0, y, 1e-300))
        np.testing.assert_allclose(glm.unit_deviance("poisson", y, theta), 0.0, atol=1e-12)
