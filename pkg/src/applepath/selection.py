"""Choosing the penalty level along a path: extended BIC and K-fold CV."""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from . import glm
from .exceptions import DegenerateResponseError, FoldDegeneracyError
from .glm import Dataset, Family
from .path import PathConfig, PathPoint, PathSolution, solve_path
from .penalty import PenaltySpec

logger = logging.getLogger(__name__)

__all__ = [
    "Criterion",
    "SelectionReport",
    "logchoose",
    "ebic_score",
    "select_ebic",
    "fold_assignment",
    "select_cv",
]


class Criterion(str, enum.Enum):
    EBIC = "ebic"
    CV = "cv"


@dataclass
class SelectionReport:
    """Per-lambda criterion values aligned with the path points.

    For cross-validation ``score_sd`` holds the standard deviation of the fold
    deviances and ``path`` the full-data path the choice refers to.
    """

    criterion: Criterion
    lambdas: np.ndarray
    scores: np.ndarray
    chosen_index: int
    chosen_beta: np.ndarray
    score_sd: Optional[np.ndarray] = None
    path: Optional[PathSolution] = None

    @property
    def chosen_lambda(self) -> float:
        return float(self.lambdas[self.chosen_index])

    @property
    def per_lambda(self) -> list:
        return list(zip(self.lambdas.tolist(), self.scores.tolist()))


def logchoose(p: int, k: int) -> float:
    """``log(p choose k)`` through log-gamma."""
    if not 0 <= k <= p:
        raise ValueError(f"need 0 <= k <= p, got p={p}, k={k}")
    return float(gammaln(p + 1) - gammaln(k + 1) - gammaln(p - k + 1))


def ebic_score(data: Dataset, point: PathPoint, gamma_e: float = 1.0, p: Optional[int] = None) -> float:
    """``2n * nll + nu log n + 2 gamma_e log C(p, nu)``, nu = non-zero slopes.

    The intercept is not counted in ``nu``.
    """
    if not 0.0 <= gamma_e <= 1.0:
        raise ValueError(f"gamma_e must lie in [0, 1], got {gamma_e!r}")
    p = data.p if p is None else p
    n = data.n
    nu = int(np.count_nonzero(point.beta[1:]))
    nll = glm.neg_log_likelihood(data, point.beta)
    return 2.0 * n * nll + nu * np.log(n) + 2.0 * gamma_e * logchoose(p, nu)


def _argmin_first(scores: np.ndarray) -> int:
    # first minimiser == largest lambda among ties
    return int(np.argmin(scores))


def select_ebic(path: PathSolution, data: Dataset, gamma_e: float = 1.0) -> SelectionReport:
    if not path.points:
        raise ValueError("cannot select from an empty path")
    scores = np.array([ebic_score(data, pt, gamma_e) for pt in path.points])
    i = _argmin_first(scores)
    return SelectionReport(Criterion.EBIC, path.lambdas, scores, i, path.points[i].beta.copy(), path=path)


def fold_assignment(n: int, folds: int, seed=None) -> np.ndarray:
    """Fold label per observation: a seeded permutation dealt round-robin."""
    if folds < 2 or folds > n:
        raise ValueError(f"need 2 <= folds <= n, got folds={folds}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    labels = np.empty(n, dtype=np.intp)
    labels[perm] = np.arange(n) % folds
    return labels


def _fold_deviance(args):
    data, test_mask, penalty, config, lams = args
    train = Dataset(data.X[~test_mask], data.y[~test_mask], data.family)
    try:
        sol = solve_path(train, penalty, config, lambdas=lams)
    except DegenerateResponseError as exc:
        raise FoldDegeneracyError(f"training fold is degenerate: {exc}") from exc
    Xte, yte = data.X[test_mask], data.y[test_mask]
    out = np.full(len(lams), np.nan)
    for k, pt in enumerate(sol.points):
        theta = pt.beta[0] + Xte @ pt.beta[1:]
        with np.errstate(over="ignore"):
            out[k] = float(np.sum(glm.unit_deviance(data.family, yte, theta)))
    return out


def select_cv(data: Dataset, penalty: PenaltySpec = PenaltySpec(), config: PathConfig = PathConfig(),
              folds: int = 5, seed=None, fold_ids=None, n_jobs: int = 1) -> SelectionReport:
    """K-fold cross-validation of held-out deviance on the full-data lambda grid.

    The full-data path fixes the grid; every training split is refitted on that
    grid.  Lambdas that some fold never reached (early stop) score ``inf``.
    """
    if data.family == Family.LOGISTIC and data.n < folds:
        raise ValueError(f"need n >= folds, got n={data.n}, folds={folds}")
    full = solve_path(data, penalty, config)
    lams = full.lambdas
    labels = fold_assignment(data.n, folds, seed) if fold_ids is None else np.asarray(fold_ids)
    if labels.shape != (data.n,):
        raise ValueError("fold_ids must have one label per observation")
    jobs = [(data, labels == f, penalty, config, lams) for f in np.unique(labels)]
    for _, mask, *_ in jobs:
        ytr = data.y[~mask]
        if data.family == Family.LOGISTIC and (ytr.min() == ytr.max()):
            raise FoldDegeneracyError("a logistic training fold has a constant response")
    if n_jobs == 1:
        devs = [_fold_deviance(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            devs = list(pool.map(_fold_deviance, jobs))
    devs = np.vstack(devs)
    reached = np.all(np.isfinite(devs), axis=0)
    mean = np.where(reached, np.mean(np.where(np.isfinite(devs), devs, 0.0), axis=0), np.inf)
    sd = np.where(reached, np.std(np.where(np.isfinite(devs), devs, 0.0), axis=0, ddof=1), np.nan)
    i = _argmin_first(mean)
    return SelectionReport(Criterion.CV, lams, mean, i, full.points[i].beta.copy(), score_sd=sd, path=full)
