"""Adaptive regression splines: greedy hinge growth, GCV-driven pruning.

The forward pass repeatedly adds the mirrored hinge pair
max(0, x_j - t) / max(0, t - x_j) (times an existing parent term, when
interactions are allowed) that most reduces the residual sum of squares,
with knots taken at observed data values. The backward pass deletes terms
one at a time, keeping the subset with the lowest generalized
cross-validation score. Effective parameters for GCV are
M + penalty * (M - 1) / 2, M counting the intercept.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

# A term is a tuple of factors (feature, knot, sign); () is the intercept.
Factor = tuple[int, float, int]
Term = tuple[Factor, ...]


@dataclass
class MarsParams:
    terms: list[Term]
    coefficients: np.ndarray
    forward_rss: list[float] = field(default_factory=list)
    gcv_path: list[float] = field(default_factory=list)


def _term_column(term: Term, X: np.ndarray) -> np.ndarray:
    col = np.ones(X.shape[0])
    for feature, knot, sign in term:
        col = col * np.maximum(0.0, sign * (X[:, feature] - knot))
    return col


def _design(terms: list[Term], X: np.ndarray) -> np.ndarray:
    return np.column_stack([_term_column(t, X) for t in terms])


def _rss(design: np.ndarray, y: np.ndarray) -> float:
    beta, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return float(((y - design @ beta) ** 2).sum())


def _gcv(rss: float, n: int, n_terms: int, penalty: float) -> float:
    effective = n_terms + penalty * (n_terms - 1) / 2.0
    if effective >= n:
        return np.inf
    return (rss / n) / (1.0 - effective / n) ** 2


def _candidate_knots(values: np.ndarray, max_knots: int) -> np.ndarray:
    knots = np.unique(values)
    if knots.size > max_knots:
        picks = np.linspace(0, knots.size - 1, max_knots).round().astype(int)
        knots = knots[np.unique(picks)]
    return knots


def fit_mars(
    X: np.ndarray,
    y: np.ndarray,
    max_terms: int,
    max_interaction: int,
    penalty: float,
    max_knots: int,
) -> MarsParams:
    n, p = X.shape
    terms: list[Term] = [()]
    B = np.ones((n, 1))
    rss_current = float(((y - y.mean()) ** 2).sum())
    forward_rss = [rss_current]

    # Forward pass: add mirrored hinge pairs while they help.
    while len(terms) + 2 <= max_terms and rss_current > 1e-12 * max(forward_rss[0], 1e-30):
        best = None  # (rss, parent_idx, feature, knot)
        for parent_idx, parent in enumerate(terms):
            if len(parent) >= max_interaction:
                continue
            used = {f for f, _, _ in parent}
            active = B[:, parent_idx] > 0
            if not active.any():
                continue
            for feature in range(p):
                if feature in used:
                    continue
                for knot in _candidate_knots(X[active, feature], max_knots):
                    parent_col = B[:, parent_idx]
                    up = parent_col * np.maximum(0.0, X[:, feature] - knot)
                    down = parent_col * np.maximum(0.0, knot - X[:, feature])
                    candidate = np.column_stack([B, up, down])
                    rss = _rss(candidate, y)
                    if best is None or rss < best[0] - 1e-15:
                        best = (rss, parent_idx, feature, float(knot))
        if best is None or best[0] >= rss_current - 1e-12 * max(forward_rss[0], 1e-30):
            break
        rss_current, parent_idx, feature, knot = best
        parent = terms[parent_idx]
        terms.append(parent + ((feature, knot, 1),))
        terms.append(parent + ((feature, knot, -1),))
        B = _design(terms, X)
        forward_rss.append(rss_current)

    # Backward pass: prune to the lowest-GCV subset (intercept always kept).
    def subset_gcv(subset: list[Term]) -> float:
        return _gcv(_rss(_design(subset, X), y), n, len(subset), penalty)

    current = list(terms)
    best_subset = list(current)
    best_gcv = subset_gcv(current)
    gcv_path = [best_gcv]
    while len(current) > 1:
        drop_choice = None
        drop_gcv = np.inf
        for drop_idx in range(1, len(current)):
            trial = current[:drop_idx] + current[drop_idx + 1 :]
            g = subset_gcv(trial)
            if g < drop_gcv:
                drop_gcv = g
                drop_choice = drop_idx
        current = current[:drop_choice] + current[drop_choice + 1 :]
        gcv_path.append(drop_gcv)
        if drop_gcv <= best_gcv:
            best_gcv = drop_gcv
            best_subset = list(current)

    terms = best_subset
    design = _design(terms, X)
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    while rank < len(terms) and len(terms) > 1:
        # Singular basis: drop the newest dependent term and refit.
        dropped = terms.pop()
        log.warning("mars: dropping dependent basis term %r", dropped)
        design = _design(terms, X)
        beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)

    return MarsParams(
        terms=terms,
        coefficients=np.asarray(beta, dtype=float),
        forward_rss=forward_rss,
        gcv_path=gcv_path,
    )


def predict_mars(params: MarsParams, X: np.ndarray) -> np.ndarray:
    return _design(params.terms, X) @ params.coefficients


def mars_to_jsonable(params: MarsParams) -> dict:
    return {
        "terms": [[[f, k, s] for f, k, s in term] for term in params.terms],
        "coefficients": params.coefficients.tolist(),
    }


def mars_from_jsonable(doc: dict) -> MarsParams:
    terms = [tuple((int(f), float(k), int(s)) for f, k, s in term) for term in doc["terms"]]
    return MarsParams(terms=terms, coefficients=np.asarray(doc["coefficients"], dtype=float))
