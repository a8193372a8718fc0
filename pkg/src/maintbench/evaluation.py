"""Prediction-accuracy measures and the cross-validated benchmark loop.

Three measures are reported per (dataset, technique): mean absolute error,
root mean squared error, and R-squared. The MAE comes in two forms: the
standard mean |a - p|, and the relative form mean |a - p| / |a| that the
source material labels MAE. Both are carried through the benchmark.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from . import models
from ._rng import subseed
from .ingest import Dataset, FoldPlan


class DegenerateFoldError(ValueError):
    """A fold's targets are unusable (constant training target, etc.)."""


def _paired(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise ValueError(f"actual and predicted must be equal-length vectors, got {a.shape} vs {p.shape}")
    if a.size < 1:
        raise ValueError("need at least one (actual, predicted) pair")
    return a, p


def mae(actual, predicted, mode: str = "standard") -> float:
    """Mean absolute error.

    ``standard`` is mean |a - p|. ``relative`` is mean |a - p| / |a|
    (absolute values imposed so signed errors cannot cancel); any zero
    actual value makes the relative form undefined and raises.
    """
    a, p = _paired(actual, predicted)
    if mode == "standard":
        return float(np.abs(a - p).mean())
    if mode == "relative":
        zeros = np.flatnonzero(a == 0.0)
        if zeros.size:
            raise ValueError(
                f"relative MAE is undefined: actual value at index {int(zeros[0])} is zero"
            )
        return float((np.abs(a - p) / np.abs(a)).mean())
    raise ValueError(f"unknown MAE mode {mode!r}; expected 'standard' or 'relative'")


def rmse(actual, predicted) -> float:
    """Root mean squared error: sqrt(mean (a - p)^2)."""
    a, p = _paired(actual, predicted)
    return float(np.sqrt(((a - p) ** 2).mean()))


def r_squared(actual, predicted) -> float:
    """1 - RSS/TSS. May be negative; requires nonzero target variance."""
    a, p = _paired(actual, predicted)
    if a.size < 2:
        raise ValueError("R-squared needs at least 2 pairs")
    tss = float(((a - a.mean()) ** 2).sum())
    if tss == 0.0:
        raise ValueError("R-squared is undefined: actual values have zero variance")
    rss = float(((a - p) ** 2).sum())
    return 1.0 - rss / tss


@dataclass(frozen=True)
class MetricTriple:
    """The three accuracy measures, plus the relative-MAE companion.

    ``mae_relative`` is None when the caller skipped it (zero actuals).
    """

    mae_standard: float
    mae_relative: float | None
    rmse: float
    r_squared: float


def metric_triple(actual, predicted, relative: bool = True) -> MetricTriple:
    return MetricTriple(
        mae_standard=mae(actual, predicted, "standard"),
        mae_relative=mae(actual, predicted, "relative") if relative else None,
        rmse=rmse(actual, predicted),
        r_squared=r_squared(actual, predicted),
    )


@dataclass
class BenchRow:
    """Per-(dataset, technique) cross-validation outcome."""

    dataset: str
    technique: str
    fold_metrics: list[MetricTriple]
    mean: MetricTriple
    fold_seconds: list[float]
    seconds: float

    def as_dict(self) -> dict:
        # Wall times are deliberately left out: the JSON report is the
        # byte-determinism surface; timings live in the CSV export.
        def triple(t: MetricTriple) -> dict:
            return {
                "mae": t.mae_standard,
                "mae_rel": t.mae_relative,
                "rmse": t.rmse,
                "r2": t.r_squared,
            }

        return {
            "dataset": self.dataset,
            "technique": self.technique,
            "folds": [triple(t) for t in self.fold_metrics],
            "mean": triple(self.mean),
        }


def _mean_triple(folds: list[MetricTriple]) -> MetricTriple:
    rel = [t.mae_relative for t in folds]
    return MetricTriple(
        mae_standard=float(np.mean([t.mae_standard for t in folds])),
        mae_relative=None if any(v is None for v in rel) else float(np.mean(rel)),
        rmse=float(np.mean([t.rmse for t in folds])),
        r_squared=float(np.mean([t.r_squared for t in folds])),
    )


def cross_validate(
    spec: models.RegressorSpec,
    data: Dataset,
    plan: FoldPlan,
    relative_mae: bool = True,
) -> BenchRow:
    """Fit on k-1 folds, score the held-out fold, aggregate over folds.

    Each fold's fit draws its seed from ``spec.seed`` and the fold index,
    so the whole row is deterministic given (spec, data, plan).
    """
    if plan.assignments.size != data.n_instances:
        raise ValueError(
            f"fold plan covers {plan.assignments.size} instances, dataset has {data.n_instances}"
        )
    fold_metrics: list[MetricTriple] = []
    fold_seconds: list[float] = []
    started = time.perf_counter()
    for fold in range(plan.k):
        train = plan.train_indices(fold)
        test = plan.test_indices(fold)
        y_train = data.target[train]
        if np.ptp(y_train) == 0.0:
            raise DegenerateFoldError(
                f"fold {fold}: training target is constant; cannot fit a regressor"
            )
        fold_spec = replace(spec, seed=subseed(spec.seed, "fold", fold))
        t0 = time.perf_counter()
        try:
            model = models.fit(fold_spec, data.features[train], y_train)
            predictions = models.predict(model, data.features[test])
        except Exception as exc:
            raise type(exc)(f"fold {fold}: {exc}") from exc
        fold_seconds.append(time.perf_counter() - t0)
        fold_metrics.append(metric_triple(data.target[test], predictions, relative=relative_mae))
    return BenchRow(
        dataset=data.name,
        technique=spec.technique,
        fold_metrics=fold_metrics,
        mean=_mean_triple(fold_metrics),
        fold_seconds=fold_seconds,
        seconds=time.perf_counter() - started,
    )
