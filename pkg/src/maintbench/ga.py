"""Genetic search over feature masks and forest hyperparameters.

Each candidate solution encodes a feature mask plus four forest genes
(tree count, depth cap, leaf size, feature-sampling fraction). Fitness is
the mean cross-validated RMSE of the decoded forest on the masked
features; lower is better. Tournament selection with elitism, single-point
mask crossover with uniform gene swaps, and per-bit/per-gene mutation
drive the loop. The best chromosome ever seen is refit on the full
training data to produce the returned model.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._rng import subseed, substream
from .ingest import Dataset, kfold_split
from .models import TrainedModel
from .models.forest import (
    ForestParams,
    fit_forest,
    forest_from_jsonable,
    forest_to_jsonable,
    predict_forest,
)

log = logging.getLogger(__name__)

N_TREES_BOUNDS = (10, 200)
MAX_DEPTH_BOUNDS = (2, 20)
MIN_LEAF_BOUNDS = (1, 10)


@dataclass(frozen=True)
class Chromosome:
    """Feature mask plus decoded-forest genes; at least one bit must be set."""

    mask: np.ndarray  # bool vector, length p
    n_trees: int
    max_depth: int
    min_samples_leaf: int
    mtry_fraction: float  # in (0, 1]

    def __post_init__(self) -> None:
        if self.mask.dtype != bool or self.mask.ndim != 1:
            raise ValueError("mask must be a 1-d boolean vector")
        if not self.mask.any():
            raise ValueError("chromosome mask must select at least one feature")
        for name, value, (lo, hi) in (
            ("n_trees", self.n_trees, N_TREES_BOUNDS),
            ("max_depth", self.max_depth, MAX_DEPTH_BOUNDS),
            ("min_samples_leaf", self.min_samples_leaf, MIN_LEAF_BOUNDS),
        ):
            if not lo <= value <= hi:
                raise ValueError(f"gene {name}={value} outside bounds [{lo}, {hi}]")
        if not 0.0 < self.mtry_fraction <= 1.0:
            raise ValueError(f"gene mtry_fraction={self.mtry_fraction} outside (0, 1]")

    def key(self) -> tuple:
        return (
            self.mask.tobytes(),
            self.n_trees,
            self.max_depth,
            self.min_samples_leaf,
            self.mtry_fraction,
        )

    def decoded_mtry(self) -> int:
        selected = int(self.mask.sum())
        return min(selected, max(1, round(self.mtry_fraction * selected)))


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 12
    max_generations: int = 10
    time_budget: float | None = None  # seconds; disables bit-reproducibility
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    elitism_count: int = 1
    tournament_size: int = 3
    cv_folds: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.max_generations < 1:
            raise ValueError("max_generations must be at least 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must lie in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if not 1 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must satisfy 1 <= elitism_count < population_size")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("tournament_size must lie in [1, population_size]")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be at least 2")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive when set")


@dataclass
class GenerationRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    best: Chromosome


@dataclass
class GaHistory:
    records: list[GenerationRecord] = field(default_factory=list)
    time_budget_hit: bool = False

    def to_csv(self) -> str:
        lines = ["generation,best_fitness,mean_fitness"]
        for rec in self.records:
            lines.append(f"{rec.generation},{rec.best_fitness!r},{rec.mean_fitness!r}")
        return "\n".join(lines) + "\n"


def _random_chromosome(p: int, rng: np.random.Generator) -> Chromosome:
    mask = rng.random(p) < 0.5
    while not mask.any():
        mask = rng.random(p) < 0.5
    return Chromosome(
        mask=mask,
        n_trees=int(rng.integers(N_TREES_BOUNDS[0], N_TREES_BOUNDS[1] + 1)),
        max_depth=int(rng.integers(MAX_DEPTH_BOUNDS[0], MAX_DEPTH_BOUNDS[1] + 1)),
        min_samples_leaf=int(rng.integers(MIN_LEAF_BOUNDS[0], MIN_LEAF_BOUNDS[1] + 1)),
        mtry_fraction=float(1.0 - rng.random()),  # (0, 1]
    )


def init_population(p: int, cfg: GaConfig) -> list[Chromosome]:
    """Random chromosomes: Bernoulli(0.5) masks (empty re-rolled), uniform genes."""
    rng = substream(cfg.seed, "ga_init")
    return [_random_chromosome(p, rng) for _ in range(cfg.population_size)]


def fitness(ch: Chromosome, X: np.ndarray, y: np.ndarray, cfg: GaConfig) -> float:
    """Mean held-out RMSE of the decoded forest over cfg.cv_folds folds.

    A training fold with a constant target cannot be fit; such
    chromosomes get an infinite sentinel so selection discards them.
    """
    cols = np.flatnonzero(ch.mask)
    if cols.size > X.shape[1]:
        raise ValueError(f"chromosome mask width {ch.mask.size} exceeds dataset width {X.shape[1]}")
    Xm = X[:, cols]
    plan = kfold_split(X.shape[0], cfg.cv_folds, seed=subseed(cfg.seed, "garf_cv"))
    total = 0.0
    for fold in range(plan.k):
        train = plan.train_indices(fold)
        test = plan.test_indices(fold)
        y_train = y[train]
        if np.ptp(y_train) == 0.0:
            log.warning("garf fitness: constant training target in fold %d; +inf sentinel", fold)
            return float("inf")
        forest = fit_forest(
            Xm[train],
            y_train,
            n_trees=ch.n_trees,
            mtry=ch.decoded_mtry(),
            bootstrap=True,
            max_depth=ch.max_depth,
            min_samples_leaf=ch.min_samples_leaf,
            seed=subseed(cfg.seed, "garf_fit", ch.key(), fold),
        )
        err = y[test] - predict_forest(forest, Xm[test])
        total += float(np.sqrt((err**2).mean()))
    return total / plan.k


def select(
    population: list[Chromosome],
    fitnesses: list[float],
    cfg: GaConfig,
    rng: np.random.Generator,
    count: int,
) -> list[Chromosome]:
    """Tournament winners: lower fitness wins, ties go to the lower index."""
    if len(population) != len(fitnesses):
        raise ValueError("population and fitnesses must be the same length")
    winners = []
    for _ in range(count):
        entrants = rng.permutation(len(population))[: cfg.tournament_size]
        best = min(entrants, key=lambda i: (fitnesses[i], i))
        winners.append(population[int(best)])
    return winners


def _copy(ch: Chromosome) -> Chromosome:
    return replace(ch, mask=ch.mask.copy())


def _repair_mask(mask: np.ndarray, donor_bits: np.ndarray, rng: np.random.Generator) -> None:
    if not mask.any():
        choices = np.flatnonzero(donor_bits)
        if choices.size == 0:
            mask[int(rng.integers(0, mask.size))] = True
        else:
            mask[int(choices[rng.integers(0, choices.size)])] = True


def crossover(
    parent_a: Chromosome,
    parent_b: Chromosome,
    cfg: GaConfig,
    rng: np.random.Generator,
) -> tuple[Chromosome, Chromosome]:
    """Single-point mask crossover plus uniform gene swap, or clones."""
    if rng.random() >= cfg.crossover_rate:
        return _copy(parent_a), _copy(parent_b)
    p = parent_a.mask.size
    point = int(rng.integers(1, p)) if p >= 2 else 1
    mask_a = np.concatenate([parent_a.mask[:point], parent_b.mask[point:]])
    mask_b = np.concatenate([parent_b.mask[:point], parent_a.mask[point:]])
    genes_a = [parent_a.n_trees, parent_a.max_depth, parent_a.min_samples_leaf, parent_a.mtry_fraction]
    genes_b = [parent_b.n_trees, parent_b.max_depth, parent_b.min_samples_leaf, parent_b.mtry_fraction]
    for g in range(4):
        if rng.random() < 0.5:
            genes_a[g], genes_b[g] = genes_b[g], genes_a[g]
    donor = parent_a.mask | parent_b.mask
    _repair_mask(mask_a, donor, rng)
    _repair_mask(mask_b, donor, rng)
    child_a = Chromosome(mask_a, int(genes_a[0]), int(genes_a[1]), int(genes_a[2]), float(genes_a[3]))
    child_b = Chromosome(mask_b, int(genes_b[0]), int(genes_b[1]), int(genes_b[2]), float(genes_b[3]))
    return child_a, child_b


def mutate(ch: Chromosome, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """Flip mask bits and redraw genes, each independently at mutation_rate."""
    mask = ch.mask ^ (rng.random(ch.mask.size) < cfg.mutation_rate)
    n_trees = ch.n_trees
    if rng.random() < cfg.mutation_rate:
        n_trees = int(rng.integers(N_TREES_BOUNDS[0], N_TREES_BOUNDS[1] + 1))
    max_depth = ch.max_depth
    if rng.random() < cfg.mutation_rate:
        max_depth = int(rng.integers(MAX_DEPTH_BOUNDS[0], MAX_DEPTH_BOUNDS[1] + 1))
    min_leaf = ch.min_samples_leaf
    if rng.random() < cfg.mutation_rate:
        min_leaf = int(rng.integers(MIN_LEAF_BOUNDS[0], MIN_LEAF_BOUNDS[1] + 1))
    mtry_fraction = ch.mtry_fraction
    if rng.random() < cfg.mutation_rate:
        mtry_fraction = float(1.0 - rng.random())
    if not mask.any():
        mask[int(rng.integers(0, mask.size))] = True
    return Chromosome(mask, n_trees, max_depth, min_leaf, mtry_fraction)


def _evaluate_population(
    population: list[Chromosome],
    X: np.ndarray,
    y: np.ndarray,
    cfg: GaConfig,
    cache: dict,
    jobs: int,
) -> list[float]:
    pending = []
    for ch in population:
        if ch.key() not in cache and ch.key() not in {c.key() for c in pending}:
            pending.append(ch)
    if jobs > 1 and len(pending) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: fitness(c, X, y, cfg), pending))
    else:
        results = [fitness(c, X, y, cfg) for c in pending]
    for ch, value in zip(pending, results):
        cache[ch.key()] = value
    return [cache[ch.key()] for ch in population]


@dataclass
class GarfParams:
    mask: np.ndarray
    forest: ForestParams
    chromosome: dict


def predict_garf(params: GarfParams, X: np.ndarray) -> np.ndarray:
    return predict_forest(params.forest, X[:, np.flatnonzero(params.mask)])


def garf_params_to_jsonable(params: GarfParams) -> dict:
    return {
        "mask": [bool(b) for b in params.mask],
        "chromosome": params.chromosome,
        "forest": forest_to_jsonable(params.forest),
    }


def garf_params_from_jsonable(doc: dict) -> GarfParams:
    return GarfParams(
        mask=np.asarray(doc["mask"], dtype=bool),
        forest=forest_from_jsonable(doc["forest"]),
        chromosome=doc["chromosome"],
    )


def run_garf(
    data: Dataset, cfg: GaConfig, jobs: int = 1
) -> tuple[TrainedModel, GaHistory]:
    """Full loop: evaluate, select, crossover, mutate; refit the best."""
    return _run_garf_arrays(data.features, data.target, cfg, jobs)


def run_garf_config(
    X: np.ndarray, y: np.ndarray, hyperparameters: dict, seed: int, jobs: int = 1
) -> tuple[TrainedModel, GaHistory]:
    cfg = GaConfig(seed=seed, **hyperparameters)
    return _run_garf_arrays(X, y, cfg, jobs)


def _run_garf_arrays(
    X: np.ndarray, y: np.ndarray, cfg: GaConfig, jobs: int
) -> tuple[TrainedModel, GaHistory]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    p = X.shape[1]
    started = time.perf_counter()
    population = init_population(p, cfg)
    cache: dict = {}
    history = GaHistory()
    best_ever: Chromosome | None = None
    best_ever_fitness = float("inf")

    for generation in range(cfg.max_generations):
        fitnesses = _evaluate_population(population, X, y, cfg, cache, jobs)
        gen_best = min(range(len(population)), key=lambda i: (fitnesses[i], i))
        if fitnesses[gen_best] < best_ever_fitness:
            best_ever_fitness = fitnesses[gen_best]
            best_ever = _copy(population[gen_best])
        history.records.append(
            GenerationRecord(
                generation=generation,
                best_fitness=float(fitnesses[gen_best]),
                mean_fitness=float(np.mean(fitnesses)),
                best=_copy(population[gen_best]),
            )
        )
        if generation == cfg.max_generations - 1:
            break
        if cfg.time_budget is not None and time.perf_counter() - started > cfg.time_budget:
            history.time_budget_hit = True
            log.info("garf: time budget reached after generation %d", generation)
            break

        rng = substream(cfg.seed, "ga_gen", generation)
        order = sorted(range(len(population)), key=lambda i: (fitnesses[i], i))
        next_gen = [_copy(population[i]) for i in order[: cfg.elitism_count]]
        while len(next_gen) < cfg.population_size:
            pa, pb = select(population, fitnesses, cfg, rng, 2)
            ca, cb = crossover(pa, pb, cfg, rng)
            next_gen.append(mutate(ca, cfg, rng))
            if len(next_gen) < cfg.population_size:
                next_gen.append(mutate(cb, cfg, rng))
        population = next_gen

    assert best_ever is not None
    if not np.isfinite(best_ever_fitness):
        raise ValueError(
            "garf: every evaluated chromosome hit a degenerate fold; cannot pick a model"
        )
    final_forest = fit_forest(
        X[:, np.flatnonzero(best_ever.mask)],
        y,
        n_trees=best_ever.n_trees,
        mtry=best_ever.decoded_mtry(),
        bootstrap=True,
        max_depth=best_ever.max_depth,
        min_samples_leaf=best_ever.min_samples_leaf,
        seed=subseed(cfg.seed, "garf_final"),
    )
    chromosome_doc = {
        "mask": [bool(b) for b in best_ever.mask],
        "n_trees": best_ever.n_trees,
        "max_depth": best_ever.max_depth,
        "min_samples_leaf": best_ever.min_samples_leaf,
        "mtry_fraction": best_ever.mtry_fraction,
    }
    model = TrainedModel(
        technique="garf",
        hyperparameters={
            "population_size": cfg.population_size,
            "max_generations": cfg.max_generations,
            "time_budget": cfg.time_budget,
            "crossover_rate": cfg.crossover_rate,
            "mutation_rate": cfg.mutation_rate,
            "elitism_count": cfg.elitism_count,
            "tournament_size": cfg.tournament_size,
            "cv_folds": cfg.cv_folds,
        },
        params=GarfParams(
            mask=best_ever.mask.copy(), forest=final_forest, chromosome=chromosome_doc
        ),
        n_features=p,
        target_range=(float(y.min()), float(y.max())),
        flags={
            "best_fitness": best_ever_fitness,
            "generations_run": len(history.records),
            "time_budget_hit": history.time_budget_hit,
        },
    )
    return model, history
