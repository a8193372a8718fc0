"""Single regression tree: exhaustive variance-reduction splitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._tree import grow_tree, predict_tree

_NO_POOL = np.zeros((1, 1))


@dataclass
class TreeParams:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.feature < 0)


def fit_cart(X: np.ndarray, y: np.ndarray, max_depth: int, min_samples_leaf: int) -> TreeParams:
    n = X.shape[0]
    if n < 2 * min_samples_leaf:
        raise ValueError(
            f"need at least 2*min_samples_leaf={2 * min_samples_leaf} rows, got {n}"
        )
    rows = np.arange(n, dtype=np.int64)
    arrays = grow_tree(X, y, rows, min_samples_leaf, max_depth, X.shape[1], _NO_POOL)
    return TreeParams(*(a.copy() for a in arrays))


def predict_cart(params: TreeParams, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0])
    predict_tree(params.feature, params.threshold, params.left, params.right, params.value, X, out)
    return out


def tree_to_jsonable(params: TreeParams) -> dict:
    return {
        "feature": params.feature.tolist(),
        "threshold": params.threshold.tolist(),
        "left": params.left.tolist(),
        "right": params.right.tolist(),
        "value": params.value.tolist(),
    }


def tree_from_jsonable(doc: dict) -> TreeParams:
    return TreeParams(
        feature=np.asarray(doc["feature"], dtype=np.int64),
        threshold=np.asarray(doc["threshold"], dtype=float),
        left=np.asarray(doc["left"], dtype=np.int64),
        right=np.asarray(doc["right"], dtype=np.int64),
        value=np.asarray(doc["value"], dtype=float),
    )
