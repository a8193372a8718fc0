"""One-hidden-layer neural network trained by mini-batch gradient descent.

Inputs are min-max rescaled to [0,1] and targets standardized internally;
both transforms are learned from the training data and stored on the
model. The loss is mean squared error with a linear output unit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._rng import substream


class DivergenceError(RuntimeError):
    """Training loss became non-finite."""


@dataclass
class NnParams:
    w1: np.ndarray  # (p, h)
    b1: np.ndarray  # (h,)
    w2: np.ndarray  # (h,)
    b2: float
    activation: str
    x_low: np.ndarray
    x_span: np.ndarray
    y_mean: float
    y_scale: float


def _activate(z: np.ndarray, activation: str) -> tuple[np.ndarray, np.ndarray]:
    """Return (value, derivative) of the hidden activation."""
    if activation == "tanh":
        h = np.tanh(z)
        return h, 1.0 - h**2
    if activation == "relu":
        return np.maximum(z, 0.0), (z > 0.0).astype(float)
    if activation == "sigmoid":
        h = 1.0 / (1.0 + np.exp(-z))
        return h, h * (1.0 - h)
    raise ValueError(f"unknown activation {activation!r}")


def loss_and_gradients(
    w1: np.ndarray,
    b1: np.ndarray,
    w2: np.ndarray,
    b2: float,
    X: np.ndarray,
    y: np.ndarray,
    activation: str,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray, float]:
    """MSE loss and its exact gradients for one batch."""
    z = X @ w1 + b1
    h, dh = _activate(z, activation)
    pred = h @ w2 + b2
    err = pred - y
    loss = float((err**2).mean())

    dpred = 2.0 * err / err.size
    gw2 = h.T @ dpred
    gb2 = float(dpred.sum())
    dz = np.outer(dpred, w2) * dh
    gw1 = X.T @ dz
    gb1 = dz.sum(axis=0)
    return loss, gw1, gb1, gw2, gb2


def fit_nn(
    X: np.ndarray,
    y: np.ndarray,
    hidden_units: int,
    activation: str,
    learning_rate: float,
    epochs: int,
    batch: int,
    seed: int,
) -> NnParams:
    n, p = X.shape
    x_low = X.min(axis=0)
    x_span = X.max(axis=0) - x_low
    x_span[x_span == 0.0] = 1.0
    Xs = (X - x_low) / x_span
    y_mean = float(y.mean())
    y_scale = float(y.std())
    if y_scale == 0.0:
        y_scale = 1.0
    ys = (y - y_mean) / y_scale

    rng = substream(seed, "nn", "init")
    s1 = 1.0 / np.sqrt(p)
    s2 = 1.0 / np.sqrt(hidden_units)
    w1 = rng.uniform(-s1, s1, size=(p, hidden_units))
    b1 = np.zeros(hidden_units)
    w2 = rng.uniform(-s2, s2, size=hidden_units)
    b2 = 0.0

    for epoch in range(epochs):
        order = substream(seed, "nn", "shuffle", epoch).permutation(n)
        for start in range(0, n, batch):
            rows = order[start : start + batch]
            loss, gw1, gb1, gw2, gb2 = loss_and_gradients(
                w1, b1, w2, b2, Xs[rows], ys[rows], activation
            )
            if not np.isfinite(loss):
                raise DivergenceError(f"training loss became non-finite at epoch {epoch}")
            w1 -= learning_rate * gw1
            b1 -= learning_rate * gb1
            w2 -= learning_rate * gw2
            b2 -= learning_rate * gb2
        if not np.isfinite(w1).all() or not np.isfinite(w2).all():
            raise DivergenceError(f"weights became non-finite at epoch {epoch}")

    return NnParams(
        w1=w1,
        b1=b1,
        w2=w2,
        b2=b2,
        activation=activation,
        x_low=x_low,
        x_span=x_span,
        y_mean=y_mean,
        y_scale=y_scale,
    )


def predict_nn(params: NnParams, X: np.ndarray) -> np.ndarray:
    Xs = (X - params.x_low) / params.x_span
    h, _ = _activate(Xs @ params.w1 + params.b1, params.activation)
    return (h @ params.w2 + params.b2) * params.y_scale + params.y_mean


def nn_to_jsonable(params: NnParams) -> dict:
    return {
        "w1": params.w1.tolist(),
        "b1": params.b1.tolist(),
        "w2": params.w2.tolist(),
        "b2": params.b2,
        "activation": params.activation,
        "x_low": params.x_low.tolist(),
        "x_span": params.x_span.tolist(),
        "y_mean": params.y_mean,
        "y_scale": params.y_scale,
    }


def nn_from_jsonable(doc: dict) -> NnParams:
    return NnParams(
        w1=np.asarray(doc["w1"], dtype=float),
        b1=np.asarray(doc["b1"], dtype=float),
        w2=np.asarray(doc["w2"], dtype=float),
        b2=float(doc["b2"]),
        activation=doc["activation"],
        x_low=np.asarray(doc["x_low"], dtype=float),
        x_span=np.asarray(doc["x_span"], dtype=float),
        y_mean=float(doc["y_mean"]),
        y_scale=float(doc["y_scale"]),
    )
