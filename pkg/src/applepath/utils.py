"""Small shared helpers: column standardisation and its inverse."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class Scaling(NamedTuple):
    center: np.ndarray
    scale: np.ndarray


def standardize(X: np.ndarray):
    """Centre every column and divide by its (population) standard deviation.

    Constant columns keep scale 1 so they stay at zero after centring.
    """
    X = np.asarray(X, dtype=float)
    center = X.mean(axis=0)
    scale = X.std(axis=0)
    scale = np.where(scale > 0.0, scale, 1.0)
    return (X - center) / scale, Scaling(center, scale)


def unstandardize_coefs(beta: np.ndarray, scaling: Scaling) -> np.ndarray:
    """Map coefficients fitted on standardised columns back to the raw scale.

    Works on a single vector of length ``p + 1`` or on a ``(k, p + 1)`` stack.
    """
    beta = np.asarray(beta, dtype=float)
    out = beta.copy()
    slopes = beta[..., 1:] / scaling.scale
    out[..., 1:] = slopes
    out[..., 0] = beta[..., 0] - slopes @ scaling.center
    return out
