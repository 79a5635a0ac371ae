"""scikit-learn style estimators wrapping path computation and selection.

``fit`` computes the whole path, picks one point by EBIC or cross-validation
and exposes it through ``coef_`` / ``intercept_``.  The path and the selection
report remain available as ``path_`` and ``selection_``.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .glm import Dataset, Family
from .path import PathConfig, solve_path
from .penalty import PenaltySpec
from .selection import select_cv, select_ebic
from .utils import standardize, unstandardize_coefs

__all__ = ["ApplePathLogistic", "ApplePathPoisson"]


class _ApplePathBase(BaseEstimator):
    _family: Family

    def __init__(self, penalty="lasso", gamma=3.0, n_lambda=100, lambda_min_ratio=0.01,
                 switch_c=1.0, saturation_eps=1e-6, max_active=None, tol=1e-7, max_iter=50,
                 approx="quadratic", selection="ebic", ebic_gamma=1.0, cv_folds=5,
                 random_state=None, standardize=False):
        self.penalty = penalty
        self.gamma = gamma
        self.n_lambda = n_lambda
        self.lambda_min_ratio = lambda_min_ratio
        self.switch_c = switch_c
        self.saturation_eps = saturation_eps
        self.max_active = max_active
        self.tol = tol
        self.max_iter = max_iter
        self.approx = approx
        self.selection = selection
        self.ebic_gamma = ebic_gamma
        self.cv_folds = cv_folds
        self.random_state = random_state
        self.standardize = standardize

    def _penalty_spec(self) -> PenaltySpec:
        if self.penalty == "lasso":
            return PenaltySpec.lasso()
        if self.penalty == "mcp":
            return PenaltySpec.mcp(self.gamma)
        raise ValueError(f"penalty must be 'lasso' or 'mcp', got {self.penalty!r}")

    def _path_config(self) -> PathConfig:
        return PathConfig(K=self.n_lambda, delta=self.lambda_min_ratio, c=self.switch_c,
                          epsilon=self.saturation_eps, max_active=self.max_active,
                          corr_tol=self.tol, max_corr_iter=self.max_iter, approx_order=self.approx)

    def fit(self, X, y):
        """Fit the path on ``(X, y)`` and select one penalty level."""
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        if self.selection not in ("ebic", "cv"):
            raise ValueError(f"selection must be 'ebic' or 'cv', got {self.selection!r}")
        pen, config = self._penalty_spec(), self._path_config()
        Xfit, scaling = standardize(X) if self.standardize else (X, None)
        data = Dataset(Xfit, y, self._family)
        if self.selection == "ebic":
            path = solve_path(data, pen, config)
            report = select_ebic(path, data, self.ebic_gamma)
        else:
            report = select_cv(data, pen, config, folds=self.cv_folds, seed=self.random_state)
            path = report.path
        coefs = path.coefs
        chosen = report.chosen_beta
        if scaling is not None:
            coefs = unstandardize_coefs(coefs, scaling)
            chosen = unstandardize_coefs(chosen, scaling)
        self.path_ = path
        self.selection_ = report
        self.lambdas_ = path.lambdas
        self.coef_path_ = coefs
        self.lambda_ = report.chosen_lambda
        self.intercept_ = float(chosen[0])
        self.coef_ = chosen[1:].copy()
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        """Linear predictor ``intercept_ + X coef_``."""
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return self.intercept_ + X @ self.coef_


class ApplePathLogistic(ClassifierMixin, _ApplePathBase):
    """Penalised logistic regression for 0/1 responses."""

    _family = Family.LOGISTIC

    def fit(self, X, y):
        super().fit(X, y)
        self.classes_ = np.array([0.0, 1.0])
        return self

    def predict_proba(self, X):
        p1 = expit(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.decision_function(X) > 0.0).astype(float)


class ApplePathPoisson(RegressorMixin, _ApplePathBase):
    """Penalised Poisson regression for count responses."""

    _family = Family.POISSON

    def predict(self, X):
        """Fitted mean ``exp(intercept_ + X coef_)``."""
        return np.exp(self.decision_function(X))
