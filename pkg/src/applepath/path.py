"""Predictor-corrector solution paths for LASSO and MCP penalised GLMs.

The path runs on a log-spaced decreasing grid of penalty levels.  At each grid
point the current solution is extrapolated to the next penalty level with a
second-order Taylor step in lambda (the *predictor*), then re-solved exactly
(the *corrector*) either by Newton-Raphson on the active coordinates or, for
larger models, by coordinate descent over all coordinates.

For MCP the target is the original penalty, but the concavity term entering
the Newton and predictor matrices is scaled by the smallest eigenvalue ``u`` of
the active Gram block: ``H - (u / gamma) I`` instead of ``H - I / gamma``.  Its
smallest eigenvalue is at least ``u (1 - 1/gamma)``, so the linear systems stay
positive definite for every ``gamma > 1`` while the fixed point of the
iteration is still a stationary point of the MCP objective.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import linalg

from . import glm
from ._cd import LASSO as _KIND_LASSO, MCP as _KIND_MCP, cd_gram
from .exceptions import NumericalOverflowError, SingularSystemError
from .glm import Dataset, Family
from .penalty import PenaltySpec, penalty_value

logger = logging.getLogger(__name__)

# inner sweeps per quadratic refresh; the outer loop resumes where this stops
_MAX_SWEEPS = 2000

__all__ = [
    "PathConfig",
    "PathPoint",
    "PathSolution",
    "SignHistory",
    "Corrector",
    "StopReason",
    "CorrectionResult",
    "lambda_grid",
    "active_set_lasso",
    "active_set_mcp",
    "predictor_derivatives",
    "predictor_step",
    "choose_corrector",
    "newton_correct",
    "cd_correct",
    "compute_u_min",
    "check_saturation",
    "kkt_residual",
    "solve_path",
]


class Corrector(str, enum.Enum):
    NEWTON_RAPHSON = "newton"
    COORDINATE_DESCENT = "cd"


class StopReason(str, enum.Enum):
    GRID_EXHAUSTED = "grid_exhausted"
    SATURATED = "saturated"
    MAX_ACTIVE_REACHED = "max_active_reached"


@dataclass(frozen=True)
class PathConfig:
    """Tuning constants of the path algorithm.

    ``max_active=None`` resolves to ``min(n, p) + 1`` (intercept included) when
    the path is solved.  ``approx_order="linear"`` drops the second-order term
    of the predictor.
    """

    K: int = 100
    delta: float = 0.01
    c: float = 1.0
    epsilon: float = 1e-6
    max_active: Optional[int] = None
    corr_tol: float = 1e-7
    max_corr_iter: int = 50
    theta_cap: float = 30.0
    approx_order: str = "quadratic"
    kkt_rounds: int = 5

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise ValueError(f"K must be an integer >= 2, got {self.K!r}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if not self.c > 0.0:
            raise ValueError(f"c must be positive, got {self.c!r}")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon!r}")
        if self.max_active is not None and self.max_active < 1:
            raise ValueError(f"max_active must be >= 1, got {self.max_active!r}")
        if not self.corr_tol > 0.0:
            raise ValueError(f"corr_tol must be positive, got {self.corr_tol!r}")
        if self.max_corr_iter < 1:
            raise ValueError(f"max_corr_iter must be >= 1, got {self.max_corr_iter!r}")
        if not self.theta_cap > 0.0:
            raise ValueError(f"theta_cap must be positive, got {self.theta_cap!r}")
        if self.approx_order not in ("linear", "quadratic"):
            raise ValueError(f"approx_order must be 'linear' or 'quadratic', got {self.approx_order!r}")
        object.__setattr__(self, "K", int(self.K))

    def resolved_max_active(self, n: int, p: int) -> int:
        return self.max_active if self.max_active is not None else min(n, p) + 1


@dataclass(frozen=True)
class PathPoint:
    lam: float
    beta: np.ndarray
    active_set: tuple
    corrector: Optional[Corrector]
    corr_iters: int
    kkt_residual: float
    u_min: Optional[float]
    neg_loglik: float

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.beta[1:]))


@dataclass
class PathSolution:
    points: list
    stop_reason: StopReason
    family: Family
    penalty: PenaltySpec
    config: PathConfig

    def __len__(self):
        return len(self.points)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([pt.lam for pt in self.points])

    @property
    def coefs(self) -> np.ndarray:
        """Coefficients as a ``(n_points, p + 1)`` array, intercept in column 0."""
        return np.vstack([pt.beta for pt in self.points])

    def entry_order(self) -> list:
        """Penalised variables (1-based column indices) in order of first appearance."""
        order = []
        seen = set()
        for pt in self.points:
            new = [j for j in np.flatnonzero(pt.beta[1:]) + 1 if j not in seen]
            # simultaneous entries: larger coefficient first
            new.sort(key=lambda j: -abs(pt.beta[j]))
            order.extend(int(j) for j in new)
            seen.update(new)
        return order


@dataclass
class SignHistory:
    """Signs of the two most recent solutions, full length ``p + 1``."""

    last: np.ndarray
    before_last: np.ndarray

    @classmethod
    def empty(cls, p: int) -> "SignHistory":
        return cls(np.zeros(p + 1), np.zeros(p + 1))

    def push(self, beta: np.ndarray) -> "SignHistory":
        return SignHistory(np.sign(beta), self.last)


class CorrectionResult(NamedTuple):
    beta: np.ndarray
    iters: int
    kkt_residual: float
    active_set: tuple
    converged: bool


class _Problem:
    """Dataset with the intercept-augmented design cached for column slicing."""

    def __init__(self, data: Dataset):
        self.data = data
        self.family = data.family
        self.y = data.y
        self.n, self.p = data.X.shape
        self.Xt = data.augmented()
        self.penalized = np.ones(self.p + 1, dtype=bool)
        self.penalized[0] = False

    def theta(self, beta: np.ndarray) -> np.ndarray:
        nz = np.flatnonzero(beta)
        return self.Xt[:, nz] @ beta[nz]

    def score(self, theta: np.ndarray, cols=None) -> np.ndarray:
        r = self.y - glm.mean(self.family, theta)
        X = self.Xt if cols is None else self.Xt[:, cols]
        return X.T @ r / self.n

    def nll(self, theta: np.ndarray) -> float:
        return glm.nll_from_theta(self.family, self.y, theta)

    def gram(self, theta: np.ndarray, cols) -> np.ndarray:
        X = self.Xt[:, cols]
        v = glm.variance(self.family, theta)
        return X.T @ (v[:, None] * X) / self.n


def _as_problem(data) -> _Problem:
    return data if isinstance(data, _Problem) else _Problem(data)


def _sorted_set(idx) -> np.ndarray:
    out = np.unique(np.asarray(list(idx), dtype=np.intp))
    if out.size == 0 or out[0] != 0:
        out = np.union1d([0], out).astype(np.intp)
    return out


# --------------------------------------------------------------------------- #
# Grid and active sets
# --------------------------------------------------------------------------- #


def _null_beta(prob: _Problem) -> np.ndarray:
    beta = np.zeros(prob.p + 1)
    beta[0] = glm.null_intercept(prob.family, prob.y)
    return beta


def lambda_grid(data: Dataset, config: PathConfig = PathConfig()) -> np.ndarray:
    """Log-spaced grid from ``lambda_max`` down to ``delta * lambda_max``.

    ``lambda_max`` is the largest absolute slope score at the null model (slopes
    zero, intercept at its own MLE), so the first grid point is solved by the
    null model itself.
    """
    prob = _as_problem(data)
    beta = _null_beta(prob)
    lam_max = float(np.max(np.abs(prob.score(prob.theta(beta))[1:])))
    if not lam_max > 0.0:
        from .exceptions import DegenerateResponseError

        raise DegenerateResponseError("lambda_max is 0: no slope moves the likelihood")
    ratios = config.delta ** (np.arange(config.K) / (config.K - 1))
    return lam_max * ratios


def active_set_lasso(score_vec, lambda_k: float, tol: float = 0.0) -> tuple:
    """``{0} U {j >= 1 : |score_j| >= lambda_k - tol}`` as a sorted tuple."""
    score_vec = np.asarray(score_vec, dtype=float)
    hits = np.flatnonzero(np.abs(score_vec[1:]) >= lambda_k - tol) + 1
    return tuple(int(j) for j in _sorted_set(hits))


def active_set_mcp(prev_sets, history: SignHistory, score_vec, lambda_k: float, tol: float = 0.0) -> tuple:
    """MCP active set ``(A_prev U N) \\ D``.

    ``prev_sets`` is ``(A_prev, A_prev2)``, the sets under which the two most
    recent solutions were computed, and ``history`` holds those solutions'
    signs.  ``N`` holds new coordinates whose score reaches ``lambda_k``; ``D``
    holds coordinates present in both sets whose sign flipped between the two
    solutions.
    """
    score_vec = np.asarray(score_vec, dtype=float)
    prev, prev2 = (set(int(j) for j in s) for s in prev_sets)
    prev.add(0)
    hits = np.flatnonzero(np.abs(score_vec[1:]) >= lambda_k - tol) + 1
    new = {int(j) for j in hits} - prev
    both = (prev & prev2) - {0}
    deleted = {j for j in both if history.last[j] * history.before_last[j] < 0}
    return tuple(sorted((prev | new) - deleted))


# --------------------------------------------------------------------------- #
# Penalty pieces on a fixed sign pattern
# --------------------------------------------------------------------------- #


def _curvature_scale(u: Optional[float]) -> float:
    # never more concave than the requested penalty
    return 1.0 if u is None else min(float(u), 1.0)


def _penalty_terms(pen: PenaltySpec, lam: float, b: np.ndarray, signs: np.ndarray, penalized: np.ndarray, u=None):
    """Penalty gradient and the (u-scaled) curvature to subtract from the Hessian diagonal."""
    grad = np.zeros_like(b)
    curv = np.zeros_like(b)
    if not pen.is_mcp:
        grad[penalized] = lam * signs[penalized]
        return grad, curv
    a = np.abs(b)
    inside = penalized & (a < lam * pen.gamma)
    grad[inside] = (lam - a[inside] / pen.gamma) * signs[inside]
    curv[inside] = _curvature_scale(u) / pen.gamma
    return grad, curv


def _penalty_total(pen: PenaltySpec, lam: float, b: np.ndarray, penalized: np.ndarray) -> float:
    return float(np.sum(penalty_value(pen, lam, b[penalized])))


def _entry_signs(b: np.ndarray, score_a: np.ndarray, penalized: np.ndarray) -> np.ndarray:
    signs = np.sign(b)
    fresh = penalized & (signs == 0)
    signs[fresh] = np.sign(score_a[fresh])
    signs[~penalized] = 0.0
    return signs


def kkt_residual(data, beta, lam: float, penalty: PenaltySpec, score_vec=None) -> float:
    """Largest violation of the first-order optimality conditions.

    Takes the max of ``|score_0|``, ``|score_j - pen'(beta_j)|`` over non-zero
    slopes, and ``(|score_j| - lam)_+`` over zero slopes.
    """
    prob = _as_problem(data)
    beta = np.asarray(beta, dtype=float)
    pen = penalty
    if score_vec is None:
        score_vec = prob.score(prob.theta(beta))
    nz = np.flatnonzero(beta[1:]) + 1
    zero = np.setdiff1d(np.arange(1, prob.p + 1), nz)
    res = abs(score_vec[0])
    if nz.size:
        b = beta[nz]
        if pen.is_mcp:
            deriv = np.maximum(lam - np.abs(b) / pen.gamma, 0.0) * np.sign(b)
        else:
            deriv = lam * np.sign(b)
        res = max(res, float(np.max(np.abs(score_vec[nz] - deriv))))
    if zero.size:
        res = max(res, float(np.max(np.abs(score_vec[zero]))) - lam)
    return float(res)


# --------------------------------------------------------------------------- #
# Predictor
# --------------------------------------------------------------------------- #


def compute_u_min(data, beta, active) -> float:
    """Smallest eigenvalue of ``(1/n) X_A' V X_A`` over the penalised active columns."""
    prob = _as_problem(data)
    cols = np.array([j for j in active if j != 0], dtype=np.intp)
    if cols.size == 0:
        raise ValueError("the active set has no penalised coordinate")
    G = prob.gram(prob.theta(np.asarray(beta, dtype=float)), cols)
    if cols.size == 1:
        return float(max(G[0, 0], 0.0))
    return float(max(linalg.eigvalsh(G, subset_by_index=[0, 0])[0], 0.0))


def predictor_derivatives(data, beta, active, lam: float, penalty: PenaltySpec, u_min: Optional[float] = None, approx_order: str = "quadratic"):
    """First and second derivatives of the solution in lambda over ``active``.

    Differentiating the stationarity condition ``score_A(beta) = pen'(beta_A)``
    gives ``(H - Gamma) s = -g`` and ``(H - Gamma) d = -(1/n) X_A' (T * (X_A s)^2)``
    where ``H = (1/n) X_A' V X_A`` includes the intercept, ``g`` is the sign of
    each penalised coordinate (its score sign if currently zero; 0 in the MCP
    flat region) and ``Gamma`` is ``u_min / gamma`` on the non-flat MCP
    coordinates (``1 / gamma`` when ``u_min`` is None).

    Returns ``(s, d)`` aligned with ``sorted(active)``.
    """
    prob = _as_problem(data)
    A = _sorted_set(active)
    beta = np.asarray(beta, dtype=float)
    pen = penalty
    theta = prob.theta(beta)
    XA = prob.Xt[:, A]
    b = beta[A]
    penalized = A != 0
    score_a = XA.T @ (prob.y - glm.mean(prob.family, theta)) / prob.n
    signs = _entry_signs(b, score_a, penalized)
    if pen.is_mcp:
        inside = penalized & (np.abs(b) < lam * pen.gamma)
        g = np.where(inside, signs, 0.0)
        curv = np.where(inside, _curvature_scale(u_min) / pen.gamma, 0.0)
    else:
        g, curv = signs, np.zeros_like(b)
    H = XA.T @ (glm.variance(prob.family, theta)[:, None] * XA) / prob.n
    H -= np.diag(curv)
    try:
        factor = linalg.cho_factor(H, check_finite=False)
    except linalg.LinAlgError as exc:
        raise SingularSystemError("predictor system is not positive definite") from exc
    s = linalg.cho_solve(factor, -g, check_finite=False)
    if approx_order == "linear":
        return s, np.zeros_like(s)
    eta = XA @ s
    rhs = -(XA.T @ (glm.third(prob.family, theta) * eta * eta)) / prob.n
    d = linalg.cho_solve(factor, rhs, check_finite=False)
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(d))):
        raise SingularSystemError("predictor derivatives are not finite")
    return s, d


def predictor_step(beta, active, s, d, delta_k: float) -> np.ndarray:
    """``beta_A + s delta + d delta^2 / 2`` on ``active``; zero elsewhere."""
    beta = np.asarray(beta, dtype=float)
    A = _sorted_set(active)
    warm = np.zeros_like(beta)
    warm[A] = beta[A] + np.asarray(s) * delta_k + 0.5 * np.asarray(d) * delta_k**2
    return warm


def choose_corrector(warm, n: int, c: float) -> Corrector:
    """Newton-Raphson while the number of non-zero slopes is at most ``c sqrt(n)``."""
    if np.count_nonzero(np.asarray(warm)[1:]) <= c * math.sqrt(n):
        return Corrector.NEWTON_RAPHSON
    return Corrector.COORDINATE_DESCENT


# --------------------------------------------------------------------------- #
# Correctors
# --------------------------------------------------------------------------- #


def _newton(prob: _Problem, warm, active, lam, pen: PenaltySpec, config: PathConfig, u=None) -> CorrectionResult:
    A = _sorted_set(active)
    beta = np.zeros(prob.p + 1)
    beta[A] = np.asarray(warm, dtype=float)[A]
    penalized = A != 0
    theta = prob.Xt[:, A] @ beta[A]
    signs = _entry_signs(beta[A], prob.score(theta, A), penalized)
    # a zero coordinate with zero score has no direction to move in
    stuck = penalized & (signs == 0)
    if stuck.any():
        A, signs, penalized = A[~stuck], signs[~stuck], penalized[~stuck]

    def objective(b, th):
        return prob.nll(th) + _penalty_total(pen, lam, b, penalized)

    converged = False
    iters = 0
    while iters < config.max_corr_iter:
        iters += 1
        XA = prob.Xt[:, A]
        b = beta[A]
        theta = XA @ b
        mu = glm.mean(prob.family, theta)
        v = glm.variance(prob.family, theta)
        score_a = XA.T @ (prob.y - mu) / prob.n
        pgrad, curv = _penalty_terms(pen, lam, b, signs, penalized, u)
        grad = -score_a + pgrad
        H = XA.T @ (v[:, None] * XA) / prob.n - np.diag(curv)
        try:
            step = linalg.cho_solve(linalg.cho_factor(H, check_finite=False), grad, check_finite=False)
        except linalg.LinAlgError as exc:
            raise SingularSystemError("Newton system is not positive definite") from exc
        if not np.all(np.isfinite(step)):
            raise SingularSystemError("Newton step is not finite")

        f0 = objective(b, theta)
        slope = float(grad @ step)
        t = 1.0
        for _ in range(40):
            cand = b - t * step
            try:
                f1 = objective(cand, XA @ cand)
            except NumericalOverflowError:
                f1 = np.inf
            if f1 <= f0 - 1e-4 * t * slope + 1e-12 * abs(f0):
                break
            t *= 0.5
        else:
            cand = b
        crossed = penalized & (signs * cand < 0)
        if crossed.any():
            # leave the frozen-sign orthant: zero the coordinate and drop it
            keep = ~crossed
            beta[A[crossed]] = 0.0
            beta[A[keep]] = cand[keep]
            A, signs, penalized = A[keep], signs[keep], penalized[keep]
            continue
        beta[A] = cand
        if np.max(np.abs(cand - b)) < config.corr_tol:
            converged = True
            break
    kkt = kkt_residual(prob, beta, lam, pen)
    return CorrectionResult(beta, iters, kkt, tuple(int(j) for j in A), converged)


def newton_correct(data, warm, active, lam: float, penalty: PenaltySpec, u_min: Optional[float] = None, config: PathConfig = PathConfig()) -> CorrectionResult:
    """Newton-Raphson on the active coordinates with signs frozen at the warm start.

    A penalised coordinate that crosses zero is set to zero and removed from the
    active set; the iteration then continues without it.  Raises
    :class:`SingularSystemError` if a Newton system is not positive definite.
    """
    return _newton(_as_problem(data), warm, active, lam, penalty, config, u_min)


def _cd(prob: _Problem, warm, lam, pen: PenaltySpec, config: PathConfig, working=()) -> CorrectionResult:
    beta = np.array(warm, dtype=float)
    theta = prob.theta(beta)
    score = prob.score(theta)
    W = _sorted_set(np.concatenate([
        np.flatnonzero(beta), np.asarray(list(working), dtype=np.intp),
        np.flatnonzero(np.abs(score) > lam) ,
    ]))
    kind = _KIND_MCP if pen.is_mcp else _KIND_LASSO
    gamma = pen.gamma if pen.is_mcp else np.inf
    inner_tol = 1e-2 * config.corr_tol
    converged = False
    iters = 0
    while iters < config.max_corr_iter:
        iters += 1
        penalized = W != 0
        XW = prob.Xt[:, W]
        v = glm.variance(prob.family, theta)
        G = XW.T @ (v[:, None] * XW) / prob.n
        old = beta[W].copy()
        c = G @ old + XW.T @ (prob.y - glm.mean(prob.family, theta)) / prob.n
        new = old.copy()
        cd_gram(G, c, new, penalized, kind, lam, gamma, inner_tol, _MAX_SWEEPS)

        # damp the IRLS step if it does not decrease the true objective
        f0 = prob.nll(theta) + _penalty_total(pen, lam, old, penalized)
        step = new - old
        t = 1.0
        for _ in range(40):
            cand = old + t * step
            th = XW @ cand
            try:
                f1 = prob.nll(th) + _penalty_total(pen, lam, cand, penalized)
            except NumericalOverflowError:
                f1 = np.inf
            if f1 <= f0 + 1e-12 * max(1.0, abs(f0)):
                break
            t *= 0.5
        else:
            cand, th = old, XW @ old
        beta[W] = cand
        theta = th
        if np.max(np.abs(cand - old)) < config.corr_tol:
            score = prob.score(theta)
            outside = np.ones(prob.p + 1, dtype=bool)
            outside[W] = False
            viol = np.flatnonzero(outside & (np.abs(score) > lam + config.corr_tol))
            if viol.size == 0:
                converged = True
                break
            W = np.union1d(W, viol)
    kkt = kkt_residual(prob, beta, lam, pen)
    return CorrectionResult(beta, iters, kkt, tuple(int(j) for j in W), converged)


def cd_correct(data, warm, lam: float, penalty: PenaltySpec, u_min: Optional[float] = None, config: PathConfig = PathConfig(), working=()) -> CorrectionResult:
    """Coordinate descent over all ``p + 1`` coordinates.

    Each outer iteration refreshes the quadratic (IRLS) approximation of the
    likelihood at the current iterate and solves the penalised quadratic by
    cyclic coordinate descent on a working set.  Coordinates outside the
    working set that violate their optimality condition are added before the
    solution is accepted, so the sweep effectively covers ``j = 0..p``.
    """
    return _cd(_as_problem(data), warm, lam, penalty, config, working)


def check_saturation(data, beta, config: PathConfig = PathConfig()) -> bool:
    """True when fitted values are numerically extreme.

    Logistic: some fitted probability is within ``epsilon`` of 0 or 1.
    Poisson: some ``|theta_i|`` exceeds ``theta_cap``.
    """
    prob = _as_problem(data)
    theta = prob.theta(np.asarray(beta, dtype=float))
    if prob.family == Family.LOGISTIC:
        from scipy.special import expit

        pi = expit(theta)
        return bool(pi.max() > 1.0 - config.epsilon or pi.min() < config.epsilon)
    return bool(np.max(np.abs(theta)) > config.theta_cap)


# --------------------------------------------------------------------------- #
# Path
# --------------------------------------------------------------------------- #


def _correct_at(prob, warm, A, lam, pen_base, u, config):
    """Corrector with inactive-KKT enforcement; returns (result, method, total iters, u)."""
    pen = pen_base
    method = choose_corrector(warm, prob.n, config.c)
    total = 0
    vtol = config.corr_tol
    res = None
    for _ in range(config.kkt_rounds + 1):
        if method is Corrector.NEWTON_RAPHSON:
            try:
                res = _newton(prob, warm, A, lam, pen, config, u)
            except SingularSystemError:
                logger.debug("singular Newton system at lambda=%g, switching to CD", lam)
                method = Corrector.COORDINATE_DESCENT
                continue
            total += res.iters
            if not res.converged:
                method = Corrector.COORDINATE_DESCENT
                warm = res.beta
                continue
        else:
            res = _cd(prob, warm, lam, pen, config, working=A)
            total += res.iters
        score = prob.score(prob.theta(res.beta))
        outside = np.ones(prob.p + 1, dtype=bool)
        outside[list(res.active_set)] = False
        viol = np.flatnonzero(outside & (np.abs(score) > lam + vtol))
        if viol.size == 0:
            break
        A = tuple(sorted(set(res.active_set) | {int(j) for j in viol}))
        warm = res.beta
        if pen_base.is_mcp and u is None:
            u = compute_u_min(prob, warm, A) or None
        method = choose_corrector(warm, prob.n, config.c)
    if res is None or res.kkt_residual > 10 * config.corr_tol:
        start = warm if res is None else res.beta
        res = _cd(prob, start, lam, pen, config, working=A)
        total += res.iters
        method = Corrector.COORDINATE_DESCENT
    return res, method, total, u


def solve_path(data: Dataset, penalty: PenaltySpec = PenaltySpec(), config: PathConfig = PathConfig(), lambdas: Optional[Sequence[float]] = None) -> PathSolution:
    """Compute the penalised solution path on a decreasing lambda grid.

    With ``lambdas=None`` the grid is :func:`lambda_grid`.  A user grid must be
    strictly decreasing; grid values at or above the data's ``lambda_max`` are
    solved by the null model.
    """
    prob = _as_problem(data)
    hidden_start = False
    if lambdas is None:
        lams = lambda_grid(prob, config)
    else:
        lams = np.asarray(lambdas, dtype=float)
        if lams.ndim != 1 or lams.size < 1 or np.any(lams <= 0) or np.any(np.diff(lams) >= 0):
            raise ValueError("lambdas must be positive and strictly decreasing")
        lam_max = lambda_grid(prob, replace(config, K=2))[0]
        if lams[0] < lam_max:
            # start from the null model at lambda_max, then drop that point
            lams = np.concatenate([[lam_max], lams])
            hidden_start = True
    max_active = config.resolved_max_active(prob.n, prob.p)

    beta = _null_beta(prob)
    theta = prob.theta(beta)
    score = prob.score(theta)
    init_set = (0,)
    points = [PathPoint(float(lams[0]), beta, init_set, None, 0,
                        kkt_residual(prob, beta, lams[0], penalty, score_vec=score), None, prob.nll(theta))]
    history = SignHistory.empty(prob.p).push(beta)
    prev_sets = (init_set, ())
    stop = StopReason.GRID_EXHAUSTED
    atol = 10 * config.corr_tol

    for k in range(len(lams) - 1):
        lam, lam_next = float(lams[k]), float(lams[k + 1])
        beta = points[-1].beta.copy()
        if penalty.is_mcp:
            A = active_set_mcp(prev_sets, history, score, lam, tol=atol)
            dropped = [j for j in prev_sets[0] if j not in A]
            beta[dropped] = 0.0
        else:
            A = active_set_lasso(score, lam, tol=atol)
            A = tuple(sorted(set(A) | {int(j) for j in np.flatnonzero(beta)}))
        if len(A) > max_active:
            stop = StopReason.MAX_ACTIVE_REACHED
            break

        u = None
        try:
            if penalty.is_mcp and len(A) > 1:
                u = compute_u_min(prob, beta, A)
                if u <= 0.0:
                    u = None
            try:
                s, d = predictor_derivatives(prob, beta, A, lam, penalty, u, config.approx_order)
                warm = predictor_step(beta, A, s, d, lam_next - lam)
            except SingularSystemError:
                warm = predictor_step(beta, A, 0.0, 0.0, 0.0)
            res, method, iters, u = _correct_at(prob, warm, A, lam_next, penalty, u, config)
        except NumericalOverflowError:
            logger.info("likelihood overflow at lambda=%g; stopping the path", lam_next)
            stop = StopReason.SATURATED
            break

        if res.beta.size - np.count_nonzero(res.beta[1:] == 0.0) > max_active:
            # KKT enforcement grew the model past the limit
            stop = StopReason.MAX_ACTIVE_REACHED
            break
        saturated = check_saturation(prob, res.beta, config)
        if saturated and res.kkt_residual > 10 * config.corr_tol:
            # the fit ran off to the boundary before it could be certified
            logger.info("uncertified saturated fit at lambda=%g; stopping the path", lam_next)
            stop = StopReason.SATURATED
            break
        theta = prob.theta(res.beta)
        score = prob.score(theta)
        point = PathPoint(lam_next, res.beta, res.active_set, method, iters,
                          kkt_residual(prob, res.beta, lam_next, penalty, score_vec=score),
                          u, prob.nll(theta))
        points.append(point)
        prev_sets = (res.active_set, prev_sets[0])
        history = history.push(res.beta)
        if saturated:
            stop = StopReason.SATURATED
            break

    if hidden_start:
        points = points[1:]
    return PathSolution(points, stop, prob.family, penalty, config)
