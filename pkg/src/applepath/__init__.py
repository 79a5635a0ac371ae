"""Approximate solution paths for LASSO and MCP penalised GLMs."""

from .glm import Dataset, Family
from .penalty import PenaltyKind, PenaltySpec
from .path import PathConfig, PathPoint, PathSolution, StopReason, Corrector, solve_path
from .selection import SelectionReport, select_cv, select_ebic
from .estimator import ApplePathLogistic, ApplePathPoisson

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "Family",
    "PenaltyKind",
    "PenaltySpec",
    "PathConfig",
    "PathPoint",
    "PathSolution",
    "StopReason",
    "Corrector",
    "solve_path",
    "SelectionReport",
    "select_cv",
    "select_ebic",
    "ApplePathLogistic",
    "ApplePathPoisson",
]
