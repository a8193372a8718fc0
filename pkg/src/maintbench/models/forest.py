"""Bootstrap ensemble of regression trees with per-split feature sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._rng import substream
from ._tree import grow_tree, predict_tree
from .cart import TreeParams, tree_from_jsonable, tree_to_jsonable

_NO_POOL = np.zeros((1, 1))


@dataclass
class ForestParams:
    trees: list[TreeParams]


def resolve_mtry(mtry: int | None, p: int) -> int:
    if mtry is None:
        return max(1, math.ceil(p / 3))
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must lie in [1, {p}], got {mtry}")
    return mtry


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int,
    mtry: int | None,
    bootstrap: bool,
    max_depth: int,
    min_samples_leaf: int,
    seed: int,
) -> ForestParams:
    n, p = X.shape
    mtry = resolve_mtry(mtry, p)
    trees: list[TreeParams] = []
    base_rows = np.arange(n, dtype=np.int64)
    for i in range(n_trees):
        rng = substream(seed, "tree", i)
        rows = rng.integers(0, n, size=n).astype(np.int64) if bootstrap else base_rows
        pool = rng.random((2 * n, mtry)) if mtry < p else _NO_POOL
        arrays = grow_tree(X, y, rows, min_samples_leaf, max_depth, mtry, pool)
        trees.append(TreeParams(*(a.copy() for a in arrays)))
    return ForestParams(trees=trees)


def predict_forest(params: ForestParams, X: np.ndarray) -> np.ndarray:
    total = np.zeros(X.shape[0])
    out = np.empty(X.shape[0])
    for tree in params.trees:
        predict_tree(tree.feature, tree.threshold, tree.left, tree.right, tree.value, X, out)
        total += out
    return total / len(params.trees)


def forest_to_jsonable(params: ForestParams) -> dict:
    return {"trees": [tree_to_jsonable(t) for t in params.trees]}


def forest_from_jsonable(doc: dict) -> ForestParams:
    return ForestParams(trees=[tree_from_jsonable(t) for t in doc["trees"]])
