"""Genetic search over feature subsets with adaptive weights.

One generation = evaluate everyone against a history snapshot, record the
trace, adapt weights/mutation on stagnation, then breed: keep the top half,
make children by single-point crossover of randomly paired survivors, mutate
each child with probability ``mutation_rate`` by flipping one bit.  Elites
are copied through unchanged.  All randomness derives from the config seed
via per-generation substreams, so results are reproducible bit for bit.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .classifiers import ClassifierSpec
from .data import FeatureMatrix, LabelVector
from .fitness import (
    START_WEIGHTS,
    EvaluationHistory,
    FeatureSubset,
    FitnessBreakdown,
    FitnessWeights,
    correlation_matrix,
    ensemble_fitness,
    schedule_weights,
)

WEIGHT_MODES = ("linear_schedule", "stagnation_adaptive", "combined")


@dataclass(frozen=True)
class StagnationConfig:
    min_generation: int = 5
    epsilon: float = 0.001
    alpha_step: float = 0.05
    alpha_cap: float = 1.0
    beta_step: float = 0.05
    beta_floor: float = 0.1
    mutation_step: float = 0.01
    mutation_cap: float = 0.2


@dataclass(frozen=True)
class AblationConfig:
    use_uniqueness: bool = True
    use_complexity: bool = True


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 50
    n_generations: int = 30
    mutation_rate: float = 0.05
    init_density: float = 0.5
    stagnation: StagnationConfig = field(default_factory=StagnationConfig)
    weight_mode: str = "stagnation_adaptive"
    elitism_count: int = 1
    evaluator: ClassifierSpec = field(default_factory=ClassifierSpec)
    k_folds: int = 5
    redundancy_threshold: float = 0.7
    ablation: AblationConfig = field(default_factory=AblationConfig)
    seed: int = 0
    # fixed_weights overrides the schedule entirely (useful for oracle
    # comparisons); assume_novel scores every subset as unseen.
    fixed_weights: FitnessWeights | None = None
    assume_novel: bool = False

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 4")
        if not 0.0 < self.mutation_rate <= self.stagnation.mutation_cap <= 1.0:
            raise ValueError("require 0 < mutation_rate <= mutation_cap <= 1")
        if not 0.0 < self.init_density < 1.0:
            raise ValueError("init_density must be in (0, 1)")
        if self.elitism_count >= self.population_size // 2:
            raise ValueError("elitism_count must be < population_size / 2")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"weight_mode must be one of {WEIGHT_MODES}")
        if self.n_generations < 1:
            raise ValueError("n_generations must be >= 1")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    weights: FitnessWeights
    mutation_rate: float
    best_total: float
    mean_total: float
    best_breakdown: FitnessBreakdown
    best_popcount: int


@dataclass(frozen=True)
class GAResult:
    best_subset: FeatureSubset
    best_breakdown: FitnessBreakdown
    trace: list[GenerationRecord]
    history_size: int
    repeat_evaluations: int
    wall_time: float


def _repair(bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if not bits.any():
        bits = bits.copy()
        bits[rng.integers(bits.size)] = True
    return bits


def init_population(n_features: int, config: GAConfig) -> list[FeatureSubset]:
    if n_features < 2:
        raise ValueError("need at least 2 features")
    rng = np.random.default_rng([config.seed, 0])
    pop = []
    for _ in range(config.population_size):
        bits = rng.random(n_features) < config.init_density
        pop.append(FeatureSubset(_repair(bits, rng)))
    return pop


def _sort_order(population, totals):
    # fitness desc; ties: smaller subset first, then lexicographic encoding
    keyed = sorted(range(len(population)),
                   key=lambda i: (-totals[i], population[i].popcount,
                                  population[i].encoding()))
    return keyed


def evolve_step(population: list[FeatureSubset], totals, config: GAConfig,
                rng: np.random.Generator,
                mutation_rate: float | None = None) -> list[FeatureSubset]:
    if len(totals) != len(population):
        raise ValueError("fitness list not aligned with population")
    rate = config.mutation_rate if mutation_rate is None else mutation_rate
    n_features = population[0].n_features
    order = _sort_order(population, totals)
    survivors = [population[i] for i in order[: len(population) // 2]]
    elites = [population[i] for i in order[: config.elitism_count]]

    children: list[FeatureSubset] = []
    target = config.population_size - config.elitism_count
    while len(children) < target:
        i, j = rng.integers(len(survivors), size=2)
        point = int(rng.integers(1, n_features))
        p1, p2 = survivors[i].bits, survivors[j].bits
        pair = (np.concatenate([p1[:point], p2[point:]]),
                np.concatenate([p2[:point], p1[point:]]))
        for bits in pair:
            if rng.random() < rate:
                bits = bits.copy()
                flip = rng.integers(n_features)
                bits[flip] = ~bits[flip]
            children.append(FeatureSubset(_repair(bits, rng)))
    return elites + children[:target]


def stagnation_adjust(weights: FitnessWeights, mutation_rate: float,
                      best_now: float, best_prev: float, generation: int,
                      config: GAConfig) -> tuple[FitnessWeights, float]:
    """Boost accuracy pressure and mutation when the best score plateaus."""
    s = config.stagnation
    if generation > s.min_generation and best_now - best_prev < s.epsilon:
        weights = replace(
            weights,
            alpha=min(weights.alpha + s.alpha_step, s.alpha_cap),
            beta=max(weights.beta - s.beta_step, s.beta_floor),
        )
        mutation_rate = min(mutation_rate + s.mutation_step, s.mutation_cap)
    return weights, mutation_rate


def _effective_weights(base: FitnessWeights, config: GAConfig) -> FitnessWeights:
    if not config.ablation.use_uniqueness:
        base = replace(base, gamma=0.0)
    if not config.ablation.use_complexity:
        base = replace(base, delta=0.0)
    return base


def run_adfsa(X: FeatureMatrix, y: LabelVector, config: GAConfig) -> GAResult:
    """Run the full adaptive search and return the best-ever subset."""
    t0 = time.perf_counter()
    corr = correlation_matrix(X)
    history = EvaluationHistory()
    cache: dict = {}
    population = init_population(X.n_features, config)

    adaptive = START_WEIGHTS  # state for stagnation_adaptive mode
    d_alpha = d_beta = 0.0    # accumulated deltas for combined mode
    mutation_rate = config.mutation_rate
    best_prev = 0.0
    best_subset = None
    best_breakdown = None
    trace: list[GenerationRecord] = []
    G = config.n_generations
    s = config.stagnation

    for g in range(1, G + 1):
        if config.fixed_weights is not None:
            weights = config.fixed_weights
        elif config.weight_mode == "linear_schedule":
            weights = schedule_weights(g, G)
        elif config.weight_mode == "stagnation_adaptive":
            weights = adaptive
        else:  # combined: schedule base + stagnation deltas, caps last
            base = schedule_weights(g, G)
            weights = replace(base,
                              alpha=min(base.alpha + d_alpha, s.alpha_cap),
                              beta=max(base.beta + d_beta, s.beta_floor))
        weights = _effective_weights(weights, config)

        snapshot = frozenset() if config.assume_novel else history.snapshot()
        breakdowns = [
            ensemble_fitness(X, y, ind, weights, snapshot,
                             evaluator=config.evaluator, k_folds=config.k_folds,
                             t=config.redundancy_threshold, seed=config.seed,
                             corr=corr, acc_red_cache=cache)
            for ind in population
        ]
        history.insert_all(population, g)
        totals = [b.total for b in breakdowns]
        order = _sort_order(population, totals)
        top = order[0]
        if best_breakdown is None or breakdowns[top].total > best_breakdown.total:
            best_subset, best_breakdown = population[top], breakdowns[top]
        trace.append(GenerationRecord(
            generation=g, weights=weights, mutation_rate=mutation_rate,
            best_total=totals[top], mean_total=float(np.mean(totals)),
            best_breakdown=breakdowns[top],
            best_popcount=population[top].popcount,
        ))

        if config.weight_mode in ("stagnation_adaptive", "combined"):
            if config.weight_mode == "stagnation_adaptive":
                adaptive, mutation_rate = stagnation_adjust(
                    adaptive, mutation_rate, totals[top], best_prev, g, config)
            else:
                if g > s.min_generation and totals[top] - best_prev < s.epsilon:
                    d_alpha += s.alpha_step
                    d_beta -= s.beta_step
                    mutation_rate = min(mutation_rate + s.mutation_step,
                                        s.mutation_cap)
        best_prev = totals[top]

        if g < G:
            rng = np.random.default_rng([config.seed, g])
            population = evolve_step(population, totals, config, rng,
                                     mutation_rate=mutation_rate)

    return GAResult(
        best_subset=best_subset,
        best_breakdown=best_breakdown,
        trace=trace,
        history_size=len(history),
        repeat_evaluations=history.repeats,
        wall_time=time.perf_counter() - t0,
    )


def brute_force_best(X: FeatureMatrix, y: LabelVector, weights: FitnessWeights,
                     evaluator: ClassifierSpec | None = None, t: float = 0.7,
                     k_folds: int = 5, seed: int = 0,
                     return_all: bool = False):
    """Exhaustive argmax of the fitness over all non-empty subsets.

    Verification oracle for small instances; f_uni is held at 1 for every
    subset.  Ties break toward smaller subsets, then lexicographic encoding.
    """
    n = X.n_features
    if n > 20:
        raise ValueError(f"brute force limited to 20 features, got {n}")
    corr = correlation_matrix(X)
    empty = frozenset()
    best = None
    all_totals = []
    for mask in range(1, 1 << n):
        bits = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
        subset = FeatureSubset(bits)
        bd = ensemble_fitness(X, y, subset, weights, empty,
                              evaluator=evaluator, k_folds=k_folds, t=t,
                              seed=seed, corr=corr)
        all_totals.append(bd.total)
        key = (-bd.total, subset.popcount, subset.encoding())
        if best is None or key < best[0]:
            best = (key, subset, bd)
    _, subset, bd = best
    if return_all:
        return subset, bd, all_totals
    return subset, bd


def result_to_dict(result: GAResult, config: GAConfig) -> dict:
    """JSON-ready echo of a run: indices, breakdown, trace, config, seed.

    Wall time is deliberately excluded so outputs are byte-reproducible.
    """
    def bd(b: FitnessBreakdown) -> dict:
        return {"f_acc": b.f_acc, "f_red": b.f_red, "f_uni": b.f_uni,
                "f_comp": b.f_comp, "total": b.total,
                "weights": list(b.weights_used.as_tuple())}

    return {
        "selected_indices": result.best_subset.indices(),
        "breakdown": bd(result.best_breakdown),
        "trace": [
            {"generation": r.generation,
             "alpha": r.weights.alpha, "beta": r.weights.beta,
             "gamma": r.weights.gamma, "delta": r.weights.delta,
             "mutation_rate": r.mutation_rate,
             "best_total": r.best_total, "mean_total": r.mean_total,
             "best_popcount": r.best_popcount,
             "best_breakdown": bd(r.best_breakdown)}
            for r in result.trace
        ],
        "history_size": result.history_size,
        "repeat_evaluations": result.repeat_evaluations,
        "config": _config_dict(config),
        "seed": config.seed,
    }


def _config_dict(config: GAConfig) -> dict:
    d = asdict(config)
    if config.fixed_weights is not None:
        d["fixed_weights"] = list(config.fixed_weights.as_tuple())
    return d
