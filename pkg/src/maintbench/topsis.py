"""Closeness-to-ideal ranking of alternatives over weighted criteria.

The full pipeline: vector-normalize each criterion column, apply weights,
locate the ideal and anti-ideal points (respecting benefit/cost direction),
measure Euclidean separations, and order alternatives by relative closeness
D- / (D+ + D-), descending.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BENEFIT = "benefit"
COST = "cost"


class ZeroNormColumnError(ValueError):
    """A criterion column is all zeros and cannot be vector-normalized."""


class IndistinguishableAlternativesError(ValueError):
    """All alternatives coincide on every criterion; closeness is undefined."""


@dataclass(frozen=True)
class Criterion:
    name: str
    direction: str

    def __post_init__(self) -> None:
        if self.direction not in (BENEFIT, COST):
            raise ValueError(
                f"criterion {self.name!r}: direction must be "
                f"{BENEFIT!r} or {COST!r}, got {self.direction!r}"
            )


@dataclass
class DecisionMatrix:
    """Alternatives x criteria performance table."""

    alternatives: list[str]
    criteria: list[Criterion]
    values: np.ndarray  # shape (n_alternatives, n_criteria)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if len(self.alternatives) < 2:
            raise ValueError("a decision matrix needs at least 2 alternatives")
        if len(self.criteria) < 1:
            raise ValueError("a decision matrix needs at least 1 criterion")
        if self.values.shape != (len(self.alternatives), len(self.criteria)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.alternatives)} alternatives x {len(self.criteria)} criteria"
            )
        if not np.isfinite(self.values).all():
            raise ValueError("decision matrix values must be finite")

    @property
    def directions(self) -> list[str]:
        return [c.direction for c in self.criteria]


@dataclass
class WeightVector:
    """Positive criterion weights, normalized to sum to 1 at construction."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a non-empty 1-d vector")
        if not np.isfinite(w).all() or (w <= 0).any():
            raise ValueError("all weights must be finite and > 0")
        self.weights = w / w.sum()


@dataclass
class RankingResult:
    """Everything the ranking pipeline computed, plus the final ordering.

    ``ranks[j]`` is the 1-based rank of alternative j (1 = best). Ties in
    closeness are broken by alternative label order and reported in
    ``ties`` as groups of tied labels.
    """

    alternatives: list[str]
    criteria: list[Criterion]
    normalized: np.ndarray
    weighted: np.ndarray
    ideal: np.ndarray
    anti_ideal: np.ndarray
    d_plus: np.ndarray
    d_minus: np.ndarray
    closeness: np.ndarray
    ranks: np.ndarray
    ties: list[tuple[str, ...]] = field(default_factory=list)

    def ordered_alternatives(self) -> list[str]:
        """Alternative labels from rank 1 to rank J."""
        order = np.argsort(self.ranks)
        return [self.alternatives[int(j)] for j in order]

    def as_dict(self) -> dict:
        return {
            "alternatives": list(self.alternatives),
            "criteria": [{"name": c.name, "direction": c.direction} for c in self.criteria],
            "closeness": [float(v) for v in self.closeness],
            "d_plus": [float(v) for v in self.d_plus],
            "d_minus": [float(v) for v in self.d_minus],
            "ranks": [int(r) for r in self.ranks],
            "ordered": self.ordered_alternatives(),
            "ties": [list(group) for group in self.ties],
        }


def normalize(matrix: DecisionMatrix) -> np.ndarray:
    """Divide each column by its Euclidean norm (unit-norm columns)."""
    norms = np.sqrt((matrix.values**2).sum(axis=0))
    for i, norm in enumerate(norms):
        if norm == 0.0:
            raise ZeroNormColumnError(
                f"criterion {matrix.criteria[i].name!r} is all zeros and cannot be normalized"
            )
    return matrix.values / norms


def weight(normalized: np.ndarray, weights: WeightVector) -> np.ndarray:
    """Scale each normalized column by its weight."""
    if normalized.shape[1] != weights.weights.size:
        raise ValueError(
            f"matrix has {normalized.shape[1]} criteria but {weights.weights.size} weights given"
        )
    return normalized * weights.weights


def ideal_points(weighted: np.ndarray, directions: list[str]) -> tuple[np.ndarray, np.ndarray]:
    """Per-criterion best (ideal) and worst (anti-ideal) values."""
    ideal = np.empty(weighted.shape[1])
    anti = np.empty(weighted.shape[1])
    for i, direction in enumerate(directions):
        col = weighted[:, i]
        if direction == BENEFIT:
            ideal[i], anti[i] = col.max(), col.min()
        else:
            ideal[i], anti[i] = col.min(), col.max()
    return ideal, anti


def separations(
    weighted: np.ndarray, ideal: np.ndarray, anti_ideal: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean distances of every alternative to the two reference points."""
    d_plus = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((weighted - anti_ideal) ** 2).sum(axis=1))
    return d_plus, d_minus


def rank(matrix: DecisionMatrix, weights: WeightVector) -> RankingResult:
    """Run the whole pipeline and rank alternatives by descending closeness."""
    r = normalize(matrix)
    v = weight(r, weights)
    ideal, anti = ideal_points(v, matrix.directions)
    d_plus, d_minus = separations(v, ideal, anti)

    denom = d_plus + d_minus
    if (denom == 0.0).any():
        raise IndistinguishableAlternativesError(
            "all alternatives are identical on every criterion; ranking is undefined"
        )
    closeness = d_minus / denom

    # Descending closeness; exact ties broken by label order and flagged.
    order = sorted(
        range(len(matrix.alternatives)),
        key=lambda j: (-closeness[j], matrix.alternatives[j]),
    )
    ranks = np.empty(len(order), dtype=int)
    for pos, j in enumerate(order):
        ranks[j] = pos + 1

    ties: list[tuple[str, ...]] = []
    groups: dict[float, list[str]] = {}
    for j, c in enumerate(closeness):
        groups.setdefault(float(c), []).append(matrix.alternatives[j])
    for value in sorted(groups, reverse=True):
        labels = groups[value]
        if len(labels) > 1:
            ties.append(tuple(sorted(labels)))

    return RankingResult(
        alternatives=list(matrix.alternatives),
        criteria=list(matrix.criteria),
        normalized=r,
        weighted=v,
        ideal=ideal,
        anti_ideal=anti,
        d_plus=d_plus,
        d_minus=d_minus,
        closeness=closeness,
        ranks=ranks,
        ties=ties,
    )
