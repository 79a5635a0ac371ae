"""Canonical-link exponential family models: logistic and Poisson regression.

Every likelihood quantity here is averaged over observations, i.e. the
log-likelihood is ``l(beta) = (1/n) sum_i [y_i theta_i - b(theta_i)]`` with
``theta = beta_0 + X beta_{1:}``.  The dispersion is fixed at one, which is
exact for both families.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .exceptions import (
    DegenerateResponseError,
    NumericalOverflowError,
    ResponseDomainError,
    SaturatedObservationError,
)

__all__ = [
    "Family",
    "Dataset",
    "linear_predictor",
    "neg_log_likelihood",
    "score",
    "weight_diag",
    "third_diag",
    "working_response",
    "hessian",
    "null_intercept",
    "unit_deviance",
]


class Family(str, enum.Enum):
    LOGISTIC = "logistic"
    POISSON = "poisson"

    @classmethod
    def coerce(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown family {value!r}; expected 'logistic' or 'poisson'"
            ) from None


def check_response(y: np.ndarray, family: Family) -> None:
    """Raise ResponseDomainError naming the first observation outside the support."""
    family = Family.coerce(family)
    if family == Family.LOGISTIC:
        bad = np.flatnonzero((y != 0) & (y != 1))
        expected = "0 or 1"
    else:
        bad = np.flatnonzero((y < 0) | (y != np.floor(y)))
        expected = "a non-negative integer"
    if bad.size:
        i = int(bad[0])
        raise ResponseDomainError(
            f"{family.value} response at row {i} is {y[i]!r}; expected {expected}"
        )


@dataclass(frozen=True)
class Dataset:
    """Raw design matrix (no intercept column), response and family.

    The arrays are copied to contiguous float64 and marked read-only.
    """

    X: np.ndarray
    y: np.ndarray
    family: Family

    def __post_init__(self):
        X = np.array(self.X, dtype=float, order="C")
        y = np.array(self.y, dtype=float).ravel()
        family = Family.coerce(self.family)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
        n, p = X.shape
        if n < 1 or p < 1:
            raise ValueError(f"need n >= 1 and p >= 1, got X of shape {X.shape}")
        if y.shape[0] != n:
            raise ValueError(f"X has {n} rows but y has {y.shape[0]} entries")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite entries")
        check_response(y, family)
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "family", family)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def augmented(self) -> np.ndarray:
        """Design with a leading column of ones."""
        return np.column_stack([np.ones(self.n), self.X])


def _check_beta(data: Dataset, beta) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.p + 1,):
        raise ValueError(f"beta must have length p + 1 = {data.p + 1}, got {beta.shape}")
    return beta


def linear_predictor(data: Dataset, beta) -> np.ndarray:
    beta = _check_beta(data, beta)
    return beta[0] + data.X @ beta[1:]


# Family kernels on the linear predictor.  These are shared with the path
# engine, which evaluates theta on active columns only.

def mean(family: Family, theta: np.ndarray) -> np.ndarray:
    if family == Family.LOGISTIC:
        return expit(theta)
    with np.errstate(over="ignore"):
        mu = np.exp(theta)
    if not np.all(np.isfinite(mu)):
        raise NumericalOverflowError("exp(theta) overflowed in the Poisson mean")
    return mu


def variance(family: Family, theta: np.ndarray) -> np.ndarray:
    if family == Family.LOGISTIC:
        pi = expit(theta)
        return pi * (1.0 - pi)
    return mean(family, theta)


def third(family: Family, theta: np.ndarray) -> np.ndarray:
    if family == Family.LOGISTIC:
        # pi(1-pi)(1-e^theta)/(1+e^theta) == pi(1-pi)(1-2pi), without overflow
        pi = expit(theta)
        return pi * (1.0 - pi) * (1.0 - 2.0 * pi)
    return mean(family, theta)


def cumulant(family: Family, theta: np.ndarray) -> np.ndarray:
    if family == Family.LOGISTIC:
        return np.logaddexp(0.0, theta)
    return mean(family, theta)


def nll_from_theta(family: Family, y: np.ndarray, theta: np.ndarray) -> float:
    val = float(np.mean(cumulant(family, theta) - y * theta))
    if not np.isfinite(val):
        raise NumericalOverflowError("negative log-likelihood is not finite")
    return val


def neg_log_likelihood(data: Dataset, beta) -> float:
    """Average negative log-likelihood ``-l(beta)``."""
    return nll_from_theta(data.family, data.y, linear_predictor(data, beta))


def score(data: Dataset, beta) -> np.ndarray:
    """Gradient of the average log-likelihood, length ``p + 1`` (intercept first)."""
    r = data.y - mean(data.family, linear_predictor(data, beta))
    out = np.empty(data.p + 1)
    out[0] = r.mean()
    out[1:] = data.X.T @ r / data.n
    return out


def weight_diag(data: Dataset, beta) -> np.ndarray:
    """Diagonal of V, i.e. ``b''(theta_i)`` per observation."""
    return variance(data.family, linear_predictor(data, beta))


def third_diag(data: Dataset, beta) -> np.ndarray:
    """``b'''(theta_i)`` per observation; the derivative of the weights in theta."""
    return third(data.family, linear_predictor(data, beta))


def working_response(data: Dataset, beta) -> np.ndarray:
    """IRLS pseudo-response ``theta + (y - mu) / v``."""
    theta = linear_predictor(data, beta)
    v = variance(data.family, theta)
    if np.any(v <= 0.0):
        i = int(np.flatnonzero(v <= 0.0)[0])
        raise SaturatedObservationError(f"variance weight of observation {i} underflowed to 0")
    return theta + (data.y - mean(data.family, theta)) / v


def hessian(data: Dataset, beta) -> np.ndarray:
    """Observed information ``(1/n) X~' V X~`` over all p + 1 coordinates."""
    Xt = data.augmented()
    v = weight_diag(data, beta)
    return Xt.T @ (v[:, None] * Xt) / data.n


def null_intercept(family: Family, y: np.ndarray) -> float:
    """Maximum likelihood intercept of the model with every slope at zero."""
    family = Family.coerce(family)
    ybar = float(np.mean(y))
    if family == Family.LOGISTIC:
        if ybar <= 0.0 or ybar >= 1.0:
            raise DegenerateResponseError("logistic response is constant")
        return float(np.log(ybar / (1.0 - ybar)))
    if ybar <= 0.0:
        raise DegenerateResponseError("Poisson response is identically zero")
    return float(np.log(ybar))


def unit_deviance(family: Family, y: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Per-observation deviance ``2 [b(theta) - y theta + saturated term]``."""
    family = Family.coerce(family)
    if family == Family.LOGISTIC:
        # binary y: the saturated log-likelihood is zero
        return 2.0 * (np.logaddexp(0.0, theta) - y * theta)
    mu = mean(family, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        ylogy = np.where(y > 0, y * np.log(np.where(y > 0, y, 1.0)), 0.0)
    return 2.0 * (mu - y * theta - (y - ylogy))
