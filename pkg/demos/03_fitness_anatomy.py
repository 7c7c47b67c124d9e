"""Take the ensemble fitness apart component by component.

A candidate subset's score is

    total = alpha * f_acc - beta * f_red + gamma * f_uni - delta * f_comp

This walks through each term on a small dataset, then shows how the weights
move over a run: the linear schedule shifts pressure from exploration to
accuracy and compactness, and the stagnation rule nudges alpha/beta when the
best score plateaus.
"""

from adfsa import (
    EvaluationHistory,
    FeatureSubset,
    GAConfig,
    START_WEIGHTS,
    SyntheticSpec,
    ensemble_fitness,
    f_comp,
    f_red,
    f_uni,
    generate_synthetic,
    schedule_weights,
    stagnation_adjust,
    standardize,
)


def main():
    spec = SyntheticSpec(n_samples=120, n_features=12, n_informative=3,
                         n_redundant=3, n_classes=2)
    X, y, informative = generate_synthetic(spec, seed=3)
    Xs, _, _ = standardize(X)

    subset = FeatureSubset.from_indices(informative + [0, 1], 12)
    history = EvaluationHistory()

    print(f"candidate subset: {subset.indices()} "
          f"(popcount {subset.popcount} of 12)")
    print(f"f_red (|r| > 0.7 pairs, normalized): {f_red(Xs, subset):.4f}")
    print(f"f_uni (never evaluated before):      {f_uni(subset, history)}")
    print(f"f_comp (selected fraction):          {f_comp(subset, 12):.4f}")

    bd = ensemble_fitness(Xs, y, subset, START_WEIGHTS, history)
    print(f"f_acc (5-fold CV accuracy):          {bd.f_acc:.4f}")
    print(f"total:                               {bd.total:.4f}")

    # Once recorded, the same subset loses its novelty bonus.
    history.insert_all([subset], generation=1)
    bd2 = ensemble_fitness(Xs, y, subset, START_WEIGHTS, history)
    print(f"total after first evaluation:        {bd2.total:.4f} "
          f"(novelty bonus gone)")

    print("\nlinear weight schedule over 30 generations:")
    for g in (1, 10, 20, 30):
        w = schedule_weights(g, 30)
        print(f"  g={g:>2}: alpha={w.alpha:.3f} beta={w.beta:.3f} "
              f"gamma={w.gamma:.3f} delta={w.delta:.3f}")

    print("\nstagnation adaptation on a flat fitness stream:")
    weights, rate = START_WEIGHTS, 0.05
    for g in range(6, 10):
        weights, rate = stagnation_adjust(weights, rate, best_now=0.5,
                                          best_prev=0.5, generation=g,
                                          config=GAConfig())
        print(f"  g={g}: alpha={weights.alpha:.2f} beta={weights.beta:.2f} "
              f"mutation_rate={rate:.2f}")


if __name__ == "__main__":
    main()
