"""Forward stepwise linear regression with an F-test entry criterion.

At each step the candidate giving the largest residual-sum-of-squares
reduction enters if its partial F-statistic's p-value beats alpha_enter;
otherwise selection stops. The final coefficients come from ordinary least
squares on the selected set, with a tiny ridge fallback when that design
is singular.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

log = logging.getLogger(__name__)

_RIDGE_LAMBDA = 1e-8


@dataclass
class StepwiseParams:
    selected: list[int]
    intercept: float
    coefficients: np.ndarray  # aligned with ``selected``
    training_r2: float
    rss_path: list[float] = field(default_factory=list)
    ridge_fallback: bool = False


def _ols_rss(design: np.ndarray, y: np.ndarray) -> float:
    _, residuals, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if residuals.size:
        return float(residuals[0])
    fitted = design @ np.linalg.lstsq(design, y, rcond=None)[0]
    return float(((y - fitted) ** 2).sum())


def fit_stepwise(
    X: np.ndarray,
    y: np.ndarray,
    alpha_enter: float,
    max_features: int | None = None,
) -> StepwiseParams:
    n, p = X.shape
    ones = np.ones((n, 1))
    tss = float(((y - y.mean()) ** 2).sum())
    limit = p if max_features is None else min(p, max_features)

    selected: list[int] = []
    rss_current = tss
    rss_path = [tss]

    if tss > 0.0:
        while len(selected) < limit:
            df_denom = n - (len(selected) + 2)
            if df_denom <= 0:
                break
            best_j = -1
            best_rss = np.inf
            for j in range(p):
                if j in selected:
                    continue
                design = np.hstack([ones, X[:, selected + [j]]])
                rss_j = _ols_rss(design, y)
                if rss_j < best_rss:
                    best_rss = rss_j
                    best_j = j
            if best_j < 0:
                break
            improvement = rss_current - best_rss
            if improvement <= 0.0:
                break
            if best_rss <= 1e-12 * tss:
                p_value = 0.0
            else:
                f_stat = improvement / (best_rss / df_denom)
                p_value = float(stats.f.sf(f_stat, 1, df_denom))
            if p_value >= alpha_enter:
                break
            selected.append(best_j)
            rss_current = best_rss
            rss_path.append(best_rss)

    design = np.hstack([ones, X[:, selected]]) if selected else ones
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    ridge_fallback = False
    if rank < design.shape[1]:
        # Singular selected design: ridge on the normal equations
        # (intercept unpenalized).
        penalty = np.eye(design.shape[1]) * _RIDGE_LAMBDA
        penalty[0, 0] = 0.0
        beta = np.linalg.solve(design.T @ design + penalty, design.T @ y)
        ridge_fallback = True
        log.warning(
            "stepwise: singular design on selected set %s; ridge fallback (lambda=%g)",
            selected,
            _RIDGE_LAMBDA,
        )
    fitted = design @ beta
    rss_final = float(((y - fitted) ** 2).sum())
    return StepwiseParams(
        selected=selected,
        intercept=float(beta[0]),
        coefficients=np.asarray(beta[1:], dtype=float),
        training_r2=1.0 - rss_final / tss if tss > 0 else 1.0,
        rss_path=rss_path,
        ridge_fallback=ridge_fallback,
    )


def predict_stepwise(params: StepwiseParams, X: np.ndarray) -> np.ndarray:
    out = np.full(X.shape[0], params.intercept)
    if params.selected:
        out = out + X[:, params.selected] @ params.coefficients
    return out


def stepwise_to_jsonable(params: StepwiseParams) -> dict:
    return {
        "selected": list(params.selected),
        "intercept": params.intercept,
        "coefficients": params.coefficients.tolist(),
        "training_r2": params.training_r2,
        "ridge_fallback": params.ridge_fallback,
    }


def stepwise_from_jsonable(doc: dict) -> StepwiseParams:
    return StepwiseParams(
        selected=[int(j) for j in doc["selected"]],
        intercept=float(doc["intercept"]),
        coefficients=np.asarray(doc["coefficients"], dtype=float),
        training_r2=float(doc["training_r2"]),
        ridge_fallback=bool(doc.get("ridge_fallback", False)),
    )
