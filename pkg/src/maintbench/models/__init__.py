"""Six regression techniques behind one fit/predict contract.

Every technique is configured by a :class:`RegressorSpec` (validated at
construction against the published defaults), fits into an immutable
:class:`TrainedModel`, and predicts through :func:`predict`. Models
serialize to a versioned JSON document supporting predict-only reload.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import defaults
from .cart import (
    TreeParams,
    fit_cart,
    predict_cart,
    tree_from_jsonable,
    tree_to_jsonable,
)
from .forest import (
    ForestParams,
    fit_forest,
    forest_from_jsonable,
    forest_to_jsonable,
    predict_forest,
)
from .mars import fit_mars, mars_from_jsonable, mars_to_jsonable, predict_mars
from .nn import DivergenceError, fit_nn, nn_from_jsonable, nn_to_jsonable, predict_nn
from .stepwise import (
    fit_stepwise,
    predict_stepwise,
    stepwise_from_jsonable,
    stepwise_to_jsonable,
)
from .svr import fit_svr, predict_svr, svr_from_jsonable, svr_to_jsonable

MODEL_SCHEMA_VERSION = 1

TECHNIQUES = ("swr", "svr", "nn", "mars", "cart", "rf", "garf")

__all__ = [
    "TECHNIQUES",
    "MODEL_SCHEMA_VERSION",
    "RegressorSpec",
    "TrainedModel",
    "DivergenceError",
    "fit",
    "predict",
    "model_to_jsonable",
    "model_from_jsonable",
    "save_model",
    "load_model",
]


@dataclass(frozen=True)
class RegressorSpec:
    """Declarative model configuration; hyperparameters validated eagerly."""

    technique: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        defaults.resolve(self.technique, self.hyperparameters)

    def resolved(self) -> dict:
        """Hyperparameters with defaults filled in."""
        return defaults.resolve(self.technique, self.hyperparameters)


@dataclass
class TrainedModel:
    """An opaque fitted predictor plus its training metadata."""

    technique: str
    hyperparameters: dict
    params: object
    n_features: int
    target_range: tuple[float, float]
    training_seconds: float = 0.0
    flags: dict = field(default_factory=dict)


def _validate_training_data(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"incompatible shapes: X {X.shape}, y {y.shape}")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training instances")
    if not np.isfinite(X).all() or not np.isfinite(y).all():
        raise ValueError("training data must be finite (preprocess first)")
    return X, y


def fit(spec: RegressorSpec, X, y) -> TrainedModel:
    """Train ``spec.technique`` on (X, y); deterministic given spec.seed."""
    X, y = _validate_training_data(X, y)
    hp = spec.resolved()
    started = time.perf_counter()
    flags: dict = {}

    if spec.technique == "swr":
        params = fit_stepwise(X, y, hp["alpha_enter"], hp["max_features"])
        flags["ridge_fallback"] = params.ridge_fallback
    elif spec.technique == "cart":
        params = fit_cart(X, y, hp["max_depth"], hp["min_samples_leaf"])
    elif spec.technique == "rf":
        params = fit_forest(
            X,
            y,
            n_trees=hp["n_trees"],
            mtry=hp["mtry"],
            bootstrap=hp["bootstrap"],
            max_depth=hp["max_depth"],
            min_samples_leaf=hp["min_samples_leaf"],
            seed=spec.seed,
        )
    elif spec.technique == "svr":
        params = fit_svr(
            X,
            y,
            C=hp["C"],
            epsilon=hp["epsilon"],
            kernel=hp["kernel"],
            gamma=hp["gamma"],
            tol=hp["tol"],
            max_iter=hp["max_iter"],
        )
        flags["converged"] = params.converged
    elif spec.technique == "nn":
        params = fit_nn(
            X,
            y,
            hidden_units=hp["hidden_units"],
            activation=hp["activation"],
            learning_rate=hp["learning_rate"],
            epochs=hp["epochs"],
            batch=hp["batch"],
            seed=spec.seed,
        )
    elif spec.technique == "mars":
        params = fit_mars(
            X,
            y,
            max_terms=hp["max_terms"],
            max_interaction=hp["max_interaction"],
            penalty=hp["penalty"],
            max_knots=hp["max_knots"],
        )
    elif spec.technique == "garf":
        from .. import ga  # fit-time import; ga builds on this package

        model, _ = ga.run_garf_config(X, y, hp, spec.seed)
        model.training_seconds = time.perf_counter() - started
        return model
    else:  # pragma: no cover - RegressorSpec already validated
        raise ValueError(f"unknown technique {spec.technique!r}")

    return TrainedModel(
        technique=spec.technique,
        hyperparameters=hp,
        params=params,
        n_features=X.shape[1],
        target_range=(float(y.min()), float(y.max())),
        training_seconds=time.perf_counter() - started,
        flags=flags,
    )


def predict(model: TrainedModel, X) -> np.ndarray:
    """Predict one value per row; X must match the fit-time feature count."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        given = X.shape[1] if X.ndim == 2 else X.shape
        raise ValueError(
            f"feature count mismatch: model expects {model.n_features} columns, got {given}"
        )
    if model.technique == "swr":
        return predict_stepwise(model.params, X)
    if model.technique == "cart":
        return predict_cart(model.params, X)
    if model.technique == "rf":
        return predict_forest(model.params, X)
    if model.technique == "svr":
        return predict_svr(model.params, X)
    if model.technique == "nn":
        return predict_nn(model.params, X)
    if model.technique == "mars":
        return predict_mars(model.params, X)
    if model.technique == "garf":
        from .. import ga

        return ga.predict_garf(model.params, X)
    raise ValueError(f"unknown technique {model.technique!r}")


_TO_JSONABLE = {
    "swr": stepwise_to_jsonable,
    "cart": tree_to_jsonable,
    "rf": forest_to_jsonable,
    "svr": svr_to_jsonable,
    "nn": nn_to_jsonable,
    "mars": mars_to_jsonable,
}

_FROM_JSONABLE = {
    "swr": stepwise_from_jsonable,
    "cart": tree_from_jsonable,
    "rf": forest_from_jsonable,
    "svr": svr_from_jsonable,
    "nn": nn_from_jsonable,
    "mars": mars_from_jsonable,
}


def model_to_jsonable(model: TrainedModel) -> dict:
    if model.technique == "garf":
        from .. import ga

        params_doc = ga.garf_params_to_jsonable(model.params)
    else:
        params_doc = _TO_JSONABLE[model.technique](model.params)
    return {
        "schema_version": MODEL_SCHEMA_VERSION,
        "technique": model.technique,
        "hyperparameters": model.hyperparameters,
        "n_features": model.n_features,
        "target_range": list(model.target_range),
        "flags": model.flags,
        "params": params_doc,
    }


def model_from_jsonable(doc: dict) -> TrainedModel:
    if doc.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ValueError(
            f"unsupported model schema_version {doc.get('schema_version')!r}; "
            f"this build reads version {MODEL_SCHEMA_VERSION}"
        )
    technique = doc["technique"]
    if technique == "garf":
        from .. import ga

        params = ga.garf_params_from_jsonable(doc["params"])
    else:
        params = _FROM_JSONABLE[technique](doc["params"])
    return TrainedModel(
        technique=technique,
        hyperparameters=doc["hyperparameters"],
        params=params,
        n_features=int(doc["n_features"]),
        target_range=tuple(doc["target_range"]),
        flags=doc.get("flags", {}),
    )


def save_model(model: TrainedModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_jsonable(model), sort_keys=True) + "\n")


def load_model(path: str | Path) -> TrainedModel:
    return model_from_jsonable(json.loads(Path(path).read_text()))
