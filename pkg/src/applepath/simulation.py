"""Simulation designs with AR(1)-correlated Gaussian predictors.

The two preset designs are sparse logistic (coefficients 3, 1.5, 2 on
variables 1, 2, 5) and sparse Poisson (1.2, 0.6, 0.8 on the same variables),
with a zero intercept.  The ``d = 24`` variants repeat the 7-long block
``(b1, b2, 0, 0, b5, 0, 0)`` eight times.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import DegenerateResponseError
from .glm import Dataset, Family
from .path import PathConfig, solve_path
from .penalty import PenaltySpec
from .selection import select_cv, select_ebic

logger = logging.getLogger(__name__)

__all__ = [
    "SimSpec",
    "Metrics",
    "SimReport",
    "generate_design",
    "generate_response",
    "compute_metrics",
    "example_beta",
    "example_spec",
    "run_experiment",
]

_BLOCKS = {
    Family.LOGISTIC: (3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0),
    Family.POISSON: (1.2, 0.6, 0.0, 0.0, 0.8, 0.0, 0.0),
}


def generate_design(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Rows i.i.d. N(0, S) with ``S[j, l] = rho^|j - l|``, built by the AR(1) recursion."""
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho!r}")
    X = rng.standard_normal((n, p))
    if rho > 0.0:
        scale = np.sqrt(1.0 - rho * rho)
        for j in range(1, p):
            X[:, j] = rho * X[:, j - 1] + scale * X[:, j]
    return X


def generate_response(family, X: np.ndarray, beta_true: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw y from the canonical-link model with ``theta = X beta_true`` (no intercept)."""
    family = Family.coerce(family)
    theta = X @ beta_true
    if family == Family.LOGISTIC:
        return rng.binomial(1, 1.0 / (1.0 + np.exp(-theta))).astype(float)
    return rng.poisson(np.exp(theta)).astype(float)


def example_beta(family, p: int, d: int = 3) -> np.ndarray:
    family = Family.coerce(family)
    block = np.array(_BLOCKS[family])
    beta = np.zeros(p)
    if d == 3:
        beta[:5] = block[:5]
    elif d == 24:
        if p < 56:
            raise ValueError("the d = 24 design needs p >= 56")
        beta[:56] = np.tile(block, 8)
    else:
        raise ValueError(f"preset designs have d = 3 or d = 24, got {d}")
    return beta


@dataclass(frozen=True)
class Metrics:
    fp: int
    tp: int
    l1_loss: float
    l2_loss: float


def compute_metrics(beta_hat: np.ndarray, beta_true: np.ndarray) -> Metrics:
    """Selection counts and estimation losses over the slopes.

    ``beta_hat`` may carry a leading intercept (length ``p + 1``); it is ignored.
    """
    beta_hat = np.asarray(beta_hat, dtype=float)
    beta_true = np.asarray(beta_true, dtype=float)
    if beta_hat.shape[0] == beta_true.shape[0] + 1:
        beta_hat = beta_hat[1:]
    if beta_hat.shape != beta_true.shape:
        raise ValueError("beta_hat and beta_true lengths disagree")
    sel = beta_hat != 0.0
    true = beta_true != 0.0
    diff = beta_hat - beta_true
    return Metrics(int(np.sum(sel & ~true)), int(np.sum(sel & true)),
                   float(np.sum(np.abs(diff))), float(np.sqrt(np.sum(diff * diff))))


@dataclass(frozen=True)
class SimSpec:
    family: Family
    n: int
    p: int
    rho: float
    beta_true: np.ndarray
    reps: int = 100
    seed: int = 0
    penalty: PenaltySpec = PenaltySpec()
    config: PathConfig = PathConfig()
    selection: str = "ebic"
    ebic_gamma: float = 1.0
    folds: int = 5
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "family", Family.coerce(self.family))
        beta = np.asarray(self.beta_true, dtype=float)
        if beta.shape != (self.p,):
            raise ValueError(f"beta_true must have length p = {self.p}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must lie in [0, 1)")
        if self.selection not in ("ebic", "cv"):
            raise ValueError("selection must be 'ebic' or 'cv'")
        object.__setattr__(self, "beta_true", beta)

    @property
    def d(self) -> int:
        return int(np.count_nonzero(self.beta_true))

    @property
    def model_label(self) -> str:
        if self.name:
            return self.name
        pen = self.penalty
        label = "MCP" if pen.is_mcp else "LASSO"
        if pen.is_mcp:
            label += f" gamma={pen.gamma:g}"
        return f"{label} rho={self.rho:g}"


def example_spec(example: int = 1, rho: float = 0.0, *, n: int = 500, p: int = 1000, d: int = 3, **kw) -> SimSpec:
    """Preset logistic (``example=1``) or Poisson (``example=2``) design."""
    family = {1: Family.LOGISTIC, 2: Family.POISSON}[example]
    return SimSpec(family=family, n=n, p=p, rho=rho, beta_true=example_beta(family, p, d), **kw)


@dataclass
class SimReport:
    spec: SimSpec
    metrics: list
    times: list
    failures: int = 0

    def _column(self, name):
        return np.array([getattr(m, name) for m in self.metrics], dtype=float)

    def summary(self) -> dict:
        """Median and spread (standard deviation across reps) of every metric."""
        out = {}
        cols = {name: self._column(name) for name in ("fp", "tp", "l1_loss", "l2_loss")}
        cols["time"] = np.asarray(self.times, dtype=float)
        for name, vals in cols.items():
            if vals.size == 0:
                out[name] = (np.nan, np.nan)
                continue
            sd = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
            out[name] = (float(np.median(vals)), sd)
        return out

    def to_csv(self, timing: bool = False) -> str:
        """Delimited table: one row, medians with standard deviations across reps."""
        s = self.summary()
        buf = io.StringIO()
        buf.write("# medians over repetitions; *_sd = standard deviation across repetitions\n")
        w = csv.writer(buf, lineterminator="\n")
        header = ["model", "method", "fp", "fp_sd", "tp", "tp_sd", "l1", "l1_sd", "l2", "l2_sd"]
        if timing:
            header += ["time", "time_sd"]
        header += ["reps", "failed"]
        w.writerow(header)
        row = [self.spec.model_label, self.spec.selection.upper()]
        for name in ("fp", "tp", "l1_loss", "l2_loss") + (("time",) if timing else ()):
            row += [f"{s[name][0]:.4f}", f"{s[name][1]:.4f}"]
        row += [len(self.metrics), self.failures]
        w.writerow(row)
        return buf.getvalue()

    def to_text(self, timing: bool = False) -> str:
        """Human-readable row in ``median(sd)`` form."""
        s = self.summary()
        cells = [self.spec.model_label, self.spec.selection.upper()]
        for name in ("fp", "tp", "l1_loss", "l2_loss") + (("time",) if timing else ()):
            cells.append(f"{s[name][0]:.2f}({s[name][1]:.2f})")
        head = ["Model", "Method", "FP", "TP", "l1 loss", "l2 loss"] + (["time"] if timing else [])
        return " | ".join(head) + "\n" + " | ".join(cells) + "\n"


def _one_rep(args):
    spec, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    X = generate_design(spec.n, spec.p, spec.rho, rng)
    y = generate_response(spec.family, X, spec.beta_true, rng)
    data = Dataset(X, y, spec.family)
    t0 = time.perf_counter()
    if spec.selection == "ebic":
        path = solve_path(data, spec.penalty, spec.config)
        elapsed = time.perf_counter() - t0
        chosen = select_ebic(path, data, spec.ebic_gamma).chosen_beta
    else:
        fold_seed = int(rng.integers(2**31))
        rep = select_cv(data, spec.penalty, spec.config, folds=spec.folds, seed=fold_seed)
        elapsed = time.perf_counter() - t0
        chosen = rep.chosen_beta
    return compute_metrics(chosen, spec.beta_true), elapsed


def _safe_rep(args):
    try:
        return _one_rep(args)
    except DegenerateResponseError as exc:
        logger.warning("repetition failed: %s", exc)
        return None


def run_experiment(spec: SimSpec, n_jobs: int = 1) -> SimReport:
    """Run ``spec.reps`` seeded repetitions; degenerate draws are counted and skipped."""
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.reps)
    jobs = [(spec, s) for s in seeds]
    if n_jobs == 1:
        results = [_safe_rep(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_safe_rep, jobs))
    ok = [r for r in results if r is not None]
    return SimReport(spec, [m for m, _ in ok], [t for _, t in ok], failures=len(results) - len(ok))
