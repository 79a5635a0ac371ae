"""Independent reference solvers used only by the tests.

Nothing here imports the solver internals: likelihoods are re-derived from
scratch so that agreement is a genuine cross-check.
"""

import numpy as np
from scipy.special import expit


def nll_and_grad(family, Xt, y, beta):
    """Averaged negative log-likelihood and its gradient on the augmented design."""
    theta = Xt @ beta
    n = y.shape[0]
    if family == "logistic":
        f = np.sum(np.logaddexp(0.0, theta) - y * theta) / n
        mu = expit(theta)
    else:
        mu = np.exp(theta)
        f = np.sum(mu - y * theta) / n
    return f, Xt.T @ (mu - y) / n


def lasso_prox_gradient(family, X, y, lam, beta0=None, tol=1e-10, max_iter=200_000):
    """Accelerated proximal gradient (FISTA with restart and backtracking).

    Minimises ``nll(beta) + lam * ||beta[1:]||_1``; the intercept is unpenalised.
    Stops when the sup-norm of the proximal step falls below ``tol``.
    """
    n, p = X.shape
    Xt = np.hstack([np.ones((n, 1)), X])
    beta = np.zeros(p + 1) if beta0 is None else np.array(beta0, dtype=float)
    z = beta.copy()
    t = 1.0
    L = 1.0

    def prox(v, step):
        out = v.copy()
        out[1:] = np.sign(v[1:]) * np.maximum(np.abs(v[1:]) - step * lam, 0.0)
        return out

    for _ in range(max_iter):
        fz, gz = nll_and_grad(family, Xt, y, z)
        while True:
            cand = prox(z - gz / L, 1.0 / L)
            diff = cand - z
            fc = nll_and_grad(family, Xt, y, cand)[0]
            if fc <= fz + gz @ diff + 0.5 * L * diff @ diff + 1e-15:
                break
            L *= 2.0
        if np.max(np.abs(diff)) < tol:
            return cand
        if (z - cand) @ (cand - beta) > 0.0:
            # gradient-based restart of the momentum
            z, t = beta.copy(), 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        z = cand + ((t - 1.0) / t_new) * (cand - beta)
        beta, t = cand, t_new
    raise RuntimeError("proximal gradient oracle did not converge")


def golden_section(f, lo, hi, tol=1e-12):
    """Minimise a univariate function on [lo, hi] by golden-section search."""
    g = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    while abs(b - a) > tol * max(1.0, abs(a) + abs(b)):
        if f(c) < f(d):
            b = d
        else:
            a = c
        c, d = b - g * (b - a), a + g * (b - a)
    return 0.5 * (a + b)


def random_glm(rng, family, n, p, nnz=3, scale=1.0):
    """Gaussian design with a sparse planted signal."""
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    idx = rng.choice(p, size=min(nnz, p), replace=False)
    beta[idx] = scale * rng.choice([-1.0, 1.0], size=idx.size) * rng.uniform(0.5, 1.0, idx.size)
    theta = X @ beta
    if family == "logistic":
        y = rng.binomial(1, expit(theta)).astype(float)
        if y.min() == y.max():
            y[0] = 1.0 - y[0]
    else:
        y = rng.poisson(np.exp(theta)).astype(float)
    return X, y
