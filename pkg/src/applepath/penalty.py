"""LASSO and MCP penalties and their univariate coordinate-descent updates.

MCP with level ``lam`` and concavity ``gamma`` is

    p(t) = lam |t| - t^2 / (2 gamma)    for |t| < gamma lam
         = gamma lam^2 / 2              otherwise.

The univariate update accepts any concavity, so callers may pass an effective
``gamma`` (for example ``gamma / u`` for a rescaled curvature).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DegenerateCurvatureError, PenaltyDomainError

__all__ = [
    "PenaltyKind",
    "PenaltySpec",
    "penalty_value",
    "penalty_derivative",
    "soft_threshold",
    "cd_update",
]


class PenaltyKind(str, enum.Enum):
    LASSO = "lasso"
    MCP = "mcp"


@dataclass(frozen=True)
class PenaltySpec:
    kind: PenaltyKind = PenaltyKind.LASSO
    gamma: Optional[float] = None

    def __post_init__(self):
        kind = PenaltyKind(str(getattr(self.kind, "value", self.kind)).lower())
        object.__setattr__(self, "kind", kind)
        if kind is PenaltyKind.MCP:
            if self.gamma is None or not self.gamma > 1.0:
                raise ValueError(f"MCP requires gamma > 1, got {self.gamma!r}")
            object.__setattr__(self, "gamma", float(self.gamma))
        elif self.gamma is not None:
            raise ValueError("gamma is only meaningful for the MCP penalty")

    @classmethod
    def lasso(cls) -> "PenaltySpec":
        return cls(PenaltyKind.LASSO)

    @classmethod
    def mcp(cls, gamma: float) -> "PenaltySpec":
        return cls(PenaltyKind.MCP, gamma)

    @property
    def is_mcp(self) -> bool:
        return self.kind is PenaltyKind.MCP


def penalty_value(spec: PenaltySpec, lam: float, t):
    """Penalty evaluated elementwise at ``t``."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    a = np.abs(np.asarray(t, dtype=float))
    if not spec.is_mcp:
        out = lam * a
    else:
        g = spec.gamma
        out = np.where(a < g * lam, lam * a - a * a / (2.0 * g), 0.5 * g * lam * lam)
    return out if out.ndim else float(out)


def penalty_derivative(spec: PenaltySpec, lam: float, t):
    """Derivative of the penalty at ``t != 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t == 0.0):
        raise PenaltyDomainError("the penalty is not differentiable at t = 0")
    s = np.sign(t)
    if not spec.is_mcp:
        out = lam * s
    else:
        out = np.maximum(lam - np.abs(t) / spec.gamma, 0.0) * s
    return out if out.ndim else float(out)


def soft_threshold(z, lam):
    z = np.asarray(z, dtype=float)
    out = np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)
    return out if out.ndim else float(out)


def cd_update(spec: PenaltySpec, lam: float, z: float, v: float) -> float:
    """Minimiser of ``(v/2) b^2 - z b + penalty(b)``.

    For MCP the problem is strictly convex only when ``v > 1 / gamma``.
    """
    if not v > 0.0:
        raise DegenerateCurvatureError(f"curvature must be positive, got v={v!r}")
    if not spec.is_mcp:
        return soft_threshold(z, lam) / v
    g = spec.gamma
    if not v > 1.0 / g:
        raise DegenerateCurvatureError(
            f"MCP update needs v > 1/gamma, got v={v!r}, gamma={g!r}"
        )
    if abs(z) <= v * g * lam:
        return soft_threshold(z, lam) / (v - 1.0 / g)
    return z / v
