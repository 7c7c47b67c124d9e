import numpy as np
import pytest

from adfsa import (
    AblationConfig,
    ClassifierSpec,
    FeatureMatrix,
    FeatureSubset,
    FitnessWeights,
    GAConfig,
    LabelVector,
    StagnationConfig,
    SyntheticSpec,
    brute_force_best,
    generate_synthetic,
    run_adfsa,
)
from adfsa.evolve import evolve_step, init_population, result_to_dict, stagnation_adjust

FAST = ClassifierSpec("knn", knn_k=3)


def small_data(seed=0, n=60, d=8, informative=2):
    spec = SyntheticSpec(n, d, informative, 0, 2, noise_std=0.3)
    return generate_synthetic(spec, seed)


class TestConfig:
    def test_invariants(self):
        with pytest.raises(ValueError):
            GAConfig(population_size=7)
        with pytest.raises(ValueError):
            GAConfig(population_size=2)
        with pytest.raises(ValueError):
            GAConfig(mutation_rate=0.5)  # above mutation_cap 0.2
        with pytest.raises(ValueError):
            GAConfig(init_density=0.0)
        with pytest.raises(ValueError):
            GAConfig(elitism_count=25, population_size=50)
        with pytest.raises(ValueError):
            GAConfig(weight_mode="tournament")


class TestInitPopulation:
    def test_popcount_concentration(self):
        cfg = GAConfig(population_size=50, seed=3)
        pop = init_population(128, cfg)
        assert len(pop) == 50
        mean_pc = np.mean([p.popcount for p in pop])
        assert abs(mean_pc - 64) <= 10

    def test_repair_on_tiny_density(self):
        cfg = GAConfig(init_density=1e-9, seed=1)
        pop = init_population(16, cfg)
        assert all(p.popcount >= 1 for p in pop)

    def test_determinism(self):
        cfg = GAConfig(seed=9)
        a = init_population(32, cfg)
        b = init_population(32, cfg)
        assert all(x == y for x, y in zip(a, b))


class TestEvolveStep:
    def test_single_point_crossover_and_repair(self):
        p1 = FeatureSubset(np.array([1, 1, 1, 1, 0, 0, 0, 0], bool))
        p2 = FeatureSubset(np.array([0, 0, 0, 0, 1, 1, 1, 1], bool))
        point = 4
        c1 = np.concatenate([p1.bits[:point], p2.bits[point:]])
        c2 = np.concatenate([p2.bits[:point], p1.bits[point:]])
        assert c1.all() and not c2.any()
        # repaired child must end with exactly one bit
        cfg = GAConfig(population_size=4, elitism_count=1, mutation_rate=1e-12,
                       seed=0)
        rng = np.random.default_rng(0)
        newpop = evolve_step([p1, p2, p1, p2], [1.0, 0.9, 0.8, 0.7], cfg, rng)
        assert all(s.popcount >= 1 for s in newpop)
        assert len(newpop) == 4

    def test_elitism_preserves_best(self):
        rng_init = np.random.default_rng(5)
        pop = [FeatureSubset(rng_init.random(10) < 0.5) for _ in range(6)]
        pop = [p if p.popcount else FeatureSubset.from_indices([0], 10) for p in pop]
        totals = [0.1, 0.9, 0.3, 0.2, 0.5, 0.4]
        cfg = GAConfig(population_size=6, elitism_count=1, mutation_rate=1e-12,
                       seed=0)
        new = evolve_step(pop, totals, cfg, np.random.default_rng(1))
        assert new[0] == pop[1]

    def test_determinism(self):
        pop = init_population(12, GAConfig(population_size=8, seed=2))
        totals = list(np.linspace(1, 0, 8))
        cfg = GAConfig(population_size=8, seed=2)
        a = evolve_step(pop, totals, cfg, np.random.default_rng([7, 1]))
        b = evolve_step(pop, totals, cfg, np.random.default_rng([7, 1]))
        assert all(x == y for x, y in zip(a, b))

    def test_crossover_closure(self):
        # without mutation every child bit comes from one of its parents;
        # with two complementary parents any child bit pattern must agree
        # with parent1 up to some point and parent2 after (or vice versa)
        p1 = FeatureSubset(np.zeros(10, bool) | np.array([1, 0] * 5, bool))
        p2 = FeatureSubset(np.array([0, 1] * 5, bool))
        cfg = GAConfig(population_size=4, elitism_count=1, mutation_rate=1e-12,
                       seed=0)
        new = evolve_step([p1, p2, p1, p2], [1.0, 0.9, 0.8, 0.7], cfg,
                          np.random.default_rng(3))
        for child in new:
            ok = any(
                np.array_equal(child.bits,
                               np.concatenate([a.bits[:pt], b.bits[pt:]]))
                for pt in range(0, 11)
                for a, b in ((p1, p2), (p2, p1)))
            assert ok

    def test_misaligned_fitness_rejected(self):
        pop = init_population(8, GAConfig(population_size=4, seed=0))
        with pytest.raises(ValueError):
            evolve_step(pop, [1.0], GAConfig(population_size=4),
                        np.random.default_rng(0))


class TestStagnationAdjust:
    def test_single_adjustment_exact(self):
        cfg = GAConfig()
        w, rate = stagnation_adjust(FitnessWeights(0.4, 0.3, 0.3, 0.2), 0.05,
                                    best_now=0.5005, best_prev=0.5,
                                    generation=7, config=cfg)
        assert w.alpha == pytest.approx(0.45, abs=1e-12)
        assert w.beta == pytest.approx(0.25, abs=1e-12)
        assert rate == pytest.approx(0.06, abs=1e-12)
        assert w.gamma == 0.3 and w.delta == 0.2

    def test_guard_before_min_generation(self):
        cfg = GAConfig()
        w0 = FitnessWeights(0.4, 0.3, 0.3, 0.2)
        w, rate = stagnation_adjust(w0, 0.05, 0.5, 0.5, generation=3, config=cfg)
        assert w == w0 and rate == 0.05

    def test_no_adjustment_on_improvement(self):
        cfg = GAConfig()
        w0 = FitnessWeights(0.4, 0.3, 0.3, 0.2)
        w, rate = stagnation_adjust(w0, 0.05, 0.6, 0.5, generation=9, config=cfg)
        assert w == w0 and rate == 0.05

    def test_caps_and_floors(self):
        cfg = GAConfig()
        w = FitnessWeights(0.98, 0.12, 0.3, 0.2)
        w, rate = stagnation_adjust(w, 0.199, 0.5, 0.5, generation=9, config=cfg)
        assert w.alpha == 1.0 and w.beta == pytest.approx(0.1, abs=1e-12)
        assert rate == 0.2
        # repeated adjustments never exceed caps
        rate = 0.05
        w = FitnessWeights(0.4, 0.3, 0.3, 0.2)
        for _ in range(20):
            w, rate = stagnation_adjust(w, rate, 0.5, 0.5, 9, cfg)
        assert w.alpha == 1.0 and w.beta == pytest.approx(0.1) and rate == 0.2


class TestRunAdfsa:
    def test_single_generation_degenerate(self):
        X, y, _ = small_data()
        cfg = GAConfig(population_size=4, n_generations=1, evaluator=FAST, seed=1)
        res = run_adfsa(X, y, cfg)
        assert len(res.trace) == 1
        assert res.best_breakdown.total == res.trace[0].best_total

    def test_determinism_bit_identical(self):
        X, y, _ = small_data(seed=2)
        cfg = GAConfig(population_size=8, n_generations=5, evaluator=FAST, seed=4)
        a = run_adfsa(X, y, cfg)
        b = run_adfsa(X, y, cfg)
        assert a.best_subset == b.best_subset
        assert a.best_breakdown == b.best_breakdown
        assert [r.best_total for r in a.trace] == [r.best_total for r in b.trace]
        assert result_to_dict(a, cfg) == result_to_dict(b, cfg)

    def test_monotone_best_with_frozen_weights(self):
        X, y, _ = small_data(seed=3)
        cfg = GAConfig(population_size=8, n_generations=8, evaluator=FAST,
                       seed=5, elitism_count=1,
                       fixed_weights=FitnessWeights(0.4, 0.3, 0.3, 0.2),
                       assume_novel=True)
        res = run_adfsa(X, y, cfg)
        totals = [r.best_total for r in res.trace]
        assert all(b >= a - 1e-12 for a, b in zip(totals, totals[1:]))

    def test_population_size_constant_and_repaired(self):
        X, y, _ = small_data(seed=4)
        cfg = GAConfig(population_size=6, n_generations=4, evaluator=FAST, seed=6)
        res = run_adfsa(X, y, cfg)
        assert res.best_subset.popcount >= 1
        assert res.history_size >= 1

    def test_duplicate_subsets_share_snapshot_uniqueness(self):
        X, y, _ = small_data(seed=5)
        from adfsa import EvaluationHistory, ensemble_fitness
        sub = FeatureSubset.from_indices([0, 1], X.n_features)
        h = EvaluationHistory()
        snap = h.snapshot()
        w = FitnessWeights(0.4, 0.3, 0.3, 0.2)
        a = ensemble_fitness(X, y, sub, w, snap, FAST)
        b = ensemble_fitness(X, y, sub, w, snap, FAST)
        assert a.f_uni == b.f_uni == 1
        h.insert_all([sub], 1)
        c = ensemble_fitness(X, y, sub, w, h, FAST)
        assert c.f_uni == 0

    def test_linear_schedule_mode_uses_schedule(self):
        X, y, _ = small_data(seed=6)
        cfg = GAConfig(population_size=6, n_generations=4, evaluator=FAST,
                       seed=7, weight_mode="linear_schedule")
        res = run_adfsa(X, y, cfg)
        assert res.trace[0].weights.alpha == pytest.approx(0.4 + 0.6 / 4)
        assert res.trace[-1].weights.alpha == pytest.approx(1.0)

    def test_ablation_zeroes_weights(self):
        X, y, _ = small_data(seed=7)
        cfg = GAConfig(population_size=6, n_generations=2, evaluator=FAST,
                       seed=8, ablation=AblationConfig(use_uniqueness=False,
                                                       use_complexity=False))
        res = run_adfsa(X, y, cfg)
        assert res.trace[0].weights.gamma == 0.0
        assert res.trace[0].weights.delta == 0.0
        bd = res.best_breakdown
        assert bd.total == pytest.approx(bd.weights_used.alpha * bd.f_acc
                                         - bd.weights_used.beta * bd.f_red,
                                         abs=1e-12)


class TestBruteForce:
    def test_informative_beats_noise_two_features(self):
        rng = np.random.default_rng(0)
        labels = np.arange(40) % 2
        X = FeatureMatrix(np.column_stack([labels * 5.0 + 0.1 * rng.standard_normal(40),
                                           rng.standard_normal(40)]))
        y = LabelVector(labels, 2)
        sub, bd = brute_force_best(X, y, FitnessWeights(0.4, 0.3, 0.3, 0.2),
                                   evaluator=FAST)
        assert sub.indices() == [0]

    def test_guard_above_20(self):
        X = FeatureMatrix(np.zeros((4, 21)) + np.arange(21))
        y = LabelVector(np.array([0, 1, 0, 1]), 2)
        with pytest.raises(ValueError):
            brute_force_best(X, y, FitnessWeights(0.4, 0.3, 0.3, 0.2))

    def test_ga_never_exceeds_oracle(self):
        X, y, _ = small_data(seed=8, n=50, d=6)
        w = FitnessWeights(0.4, 0.3, 0.3, 0.2)
        _, oracle_bd = brute_force_best(X, y, w, evaluator=FAST)
        cfg = GAConfig(population_size=8, n_generations=6, evaluator=FAST,
                       seed=9, fixed_weights=w, assume_novel=True)
        res = run_adfsa(X, y, cfg)
        assert res.best_breakdown.total <= oracle_bd.total + 1e-12
