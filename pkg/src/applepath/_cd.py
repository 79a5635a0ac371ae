"""Compiled coordinate descent on a penalised quadratic model.

Minimises ``0.5 b'Gb - c'b + sum_j pen(b_j)`` over the coordinates of a small
working set, where ``G`` is the weighted Gram matrix of the IRLS approximation.
The univariate solutions are the same closed forms as
:func:`applepath.penalty.cd_update`.
"""

import numpy as np
from numba import njit

LASSO = 0
MCP = 1


@njit(cache=True)
def _soft(z, lam):
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


@njit(cache=True)
def _mcp_value(a, lam, gamma):
    if a < gamma * lam:
        return lam * a - a * a / (2.0 * gamma)
    return 0.5 * gamma * lam * lam


@njit(cache=True)
def coordinate_update(kind, lam, gamma, z, v):
    if kind == LASSO:
        return _soft(z, lam) / v
    if v > 1.0 / gamma:
        if abs(z) <= v * gamma * lam:
            return _soft(z, lam) / (v - 1.0 / gamma)
        return z / v
    # Non-convex coordinate: the minimiser is 0 or lies in the flat region.
    b = z / v
    if abs(b) < gamma * lam:
        b = gamma * lam if z >= 0 else -gamma * lam
    obj = 0.5 * v * b * b - z * b + _mcp_value(abs(b), lam, gamma)
    if obj < 0.0:
        return b
    return 0.0


@njit(cache=True)
def cd_gram(G, c, beta, penalized, kind, lam, gamma, tol, max_sweeps):
    """Cyclic coordinate descent, in place on ``beta``; returns the sweep count."""
    m = beta.shape[0]
    q = G @ beta
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        biggest = 0.0
        for j in range(m):
            v = G[j, j]
            if v <= 0.0:
                continue
            old = beta[j]
            z = c[j] - (q[j] - v * old)
            if penalized[j]:
                new = coordinate_update(kind, lam, gamma, z, v)
            else:
                new = z / v
            diff = new - old
            if diff != 0.0:
                beta[j] = new
                for i in range(m):
                    q[i] += G[i, j] * diff
                if abs(diff) > biggest:
                    biggest = abs(diff)
        if biggest < tol:
            break
    return sweeps
