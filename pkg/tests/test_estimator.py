import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from applepath.estimator import ApplePathLogistic, ApplePathPoisson
from applepath.path import PathSolution
from applepath.simulation import example_beta, generate_design, generate_response


def make(family, n=200, p=30, seed=0):
    rng = np.random.default_rng(seed)
    X = generate_design(n, p, 0.0, rng)
    return X, generate_response(family, X, example_beta(family, p), rng)


class TestLogistic:
    def test_fit_selects_true_support(self):
        X, y = make("logistic")
        est = ApplePathLogistic().fit(X, y)
        assert isinstance(est.path_, PathSolution)
        assert est.coef_.shape == (30,)
        assert set(np.flatnonzero(est.coef_)) >= {0, 1, 4}
        assert est.lambda_ == est.selection_.chosen_lambda

    def test_predict(self):
        X, y = make("logistic")
        est = ApplePathLogistic(penalty="mcp", gamma=3.0).fit(X, y)
        proba = est.predict_proba(X)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0)
        assert set(np.unique(est.predict(X))) <= {0.0, 1.0}
        assert est.score(X, y) > 0.8

    def test_get_set_params_and_clone(self):
        est = ApplePathLogistic(penalty="mcp", gamma=2.0, n_lambda=30)
        params = est.get_params()
        assert params["gamma"] == 2.0 and params["n_lambda"] == 30
        c = clone(est).set_params(gamma=4.0)
        assert c.gamma == 4.0 and est.gamma == 2.0

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            ApplePathLogistic().predict(np.zeros((2, 3)))

    def test_input_validation(self):
        X, y = make("logistic", n=50, p=5)
        with pytest.raises(ValueError):
            ApplePathLogistic().fit(X, y[:-1])
        with pytest.raises(ValueError):
            ApplePathLogistic(penalty="scad").fit(X, y)
        est = ApplePathLogistic(n_lambda=10).fit(X, y)
        with pytest.raises(ValueError):
            est.predict(X[:, :3])

    def test_standardize_on_raw_scale(self):
        X, y = make("logistic", n=150, p=10)
        Xs = X * np.arange(1, 11)
        a = ApplePathLogistic(standardize=True).fit(X, y)
        b = ApplePathLogistic(standardize=True).fit(Xs, y)
        np.testing.assert_allclose(a.decision_function(X), b.decision_function(Xs), atol=1e-6)

    def test_cv_selection(self):
        X, y = make("logistic", n=120, p=15)
        est = ApplePathLogistic(selection="cv", cv_folds=3, random_state=0, n_lambda=30).fit(X, y)
        assert est.selection_.score_sd is not None


class TestPoisson:
    def test_fit_predict(self):
        X, y = make("poisson")
        est = ApplePathPoisson().fit(X, y)
        assert np.all(est.predict(X) > 0)
        np.testing.assert_allclose(est.coef_[[0, 1, 4]], [1.2, 0.6, 0.8], atol=0.25)
        assert est.coef_path_.shape == (len(est.path_.points), 31)
