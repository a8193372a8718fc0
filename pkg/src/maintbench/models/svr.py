"""Epsilon-insensitive support vector regression.

The dual problem is solved by sequential minimal optimization over the 2n
box variables (lower/upper tube multipliers), picking the maximal
violating pair each iteration and updating it analytically. Training stops
when the KKT violation drops below ``tol`` or ``max_iter`` pair updates
have run (the best iterate is returned and flagged unconverged).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


@dataclass
class SvrParams:
    support_vectors: np.ndarray  # (s, p)
    coefficients: np.ndarray  # (s,) alpha - alpha*
    intercept: float
    kernel: str
    gamma: float | None  # resolved value for rbf, None for linear
    converged: bool
    iterations: int


def _kernel_matrix(kernel: str, gamma: float | None, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    if kernel == "rbf":
        sq = (A**2).sum(axis=1)[:, None] + (B**2).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-gamma * sq)
    raise ValueError(f"unknown kernel {kernel!r}")


def resolve_gamma(gamma: float | None, X: np.ndarray) -> float:
    if gamma is not None:
        return float(gamma)
    spread = float(X.var())
    return 1.0 / (X.shape[1] * spread) if spread > 0 else 1.0 / X.shape[1]


def fit_svr(
    X: np.ndarray,
    y: np.ndarray,
    C: float,
    epsilon: float,
    kernel: str,
    gamma: float | None,
    tol: float,
    max_iter: int,
) -> SvrParams:
    n = X.shape[0]
    gamma_val = resolve_gamma(gamma, X) if kernel == "rbf" else None
    K = _kernel_matrix(kernel, gamma_val, X, X)

    # Box variables a[0:n] (upper tube) and a[n:2n] (lower tube), signs z.
    a = np.zeros(2 * n)
    z = np.concatenate([np.ones(n), -np.ones(n)])
    grad = np.concatenate([epsilon - y, epsilon + y])
    neg_zg = -z * grad

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        up = ((z > 0) & (a < C)) | ((z < 0) & (a > 0))
        low = ((z < 0) & (a < C)) | ((z > 0) & (a > 0))
        up_vals = np.where(up, neg_zg, -np.inf)
        low_vals = np.where(low, neg_zg, np.inf)
        i = int(np.argmax(up_vals))
        j = int(np.argmin(low_vals))
        if up_vals[i] - low_vals[j] <= tol:
            converged = True
            iterations -= 1
            break

        ii, jj = i % n, j % n
        quad = K[ii, ii] + K[jj, jj] - 2.0 * K[ii, jj]
        if quad <= 0.0:
            quad = 1e-12
        step = (neg_zg[i] - neg_zg[j]) / quad
        step = min(step, C - a[i] if z[i] > 0 else a[i])
        step = min(step, a[j] if z[j] > 0 else C - a[j])
        a[i] += z[i] * step
        a[j] -= z[j] * step

        kdiff = K[:, ii] - K[:, jj]
        grad[:n] += step * kdiff
        grad[n:] -= step * kdiff
        neg_zg[:n] = -grad[:n]
        neg_zg[n:] = grad[n:]
    else:
        log.warning("svr: not converged after %d iterations (tol=%g)", max_iter, tol)

    up = ((z > 0) & (a < C)) | ((z < 0) & (a > 0))
    low = ((z < 0) & (a < C)) | ((z > 0) & (a > 0))
    hi = float(np.max(np.where(up, neg_zg, -np.inf)))
    lo = float(np.min(np.where(low, neg_zg, np.inf)))
    intercept = (hi + lo) / 2.0

    beta = a[:n] - a[n:]
    support = np.flatnonzero(beta != 0.0)
    return SvrParams(
        support_vectors=X[support].copy(),
        coefficients=beta[support].copy(),
        intercept=intercept,
        kernel=kernel,
        gamma=gamma_val,
        converged=converged,
        iterations=iterations,
    )


def predict_svr(params: SvrParams, X: np.ndarray) -> np.ndarray:
    if params.coefficients.size == 0:
        return np.full(X.shape[0], params.intercept)
    K = _kernel_matrix(params.kernel, params.gamma, X, params.support_vectors)
    return K @ params.coefficients + params.intercept


def svr_to_jsonable(params: SvrParams) -> dict:
    return {
        "support_vectors": params.support_vectors.tolist(),
        "coefficients": params.coefficients.tolist(),
        "intercept": params.intercept,
        "kernel": params.kernel,
        "gamma": params.gamma,
        "converged": params.converged,
        "iterations": params.iterations,
    }


def svr_from_jsonable(doc: dict) -> SvrParams:
    support = np.asarray(doc["support_vectors"], dtype=float)
    if support.size == 0:
        support = support.reshape(0, 0)
    return SvrParams(
        support_vectors=support,
        coefficients=np.asarray(doc["coefficients"], dtype=float),
        intercept=float(doc["intercept"]),
        kernel=doc["kernel"],
        gamma=None if doc["gamma"] is None else float(doc["gamma"]),
        converged=bool(doc["converged"]),
        iterations=int(doc["iterations"]),
    )
