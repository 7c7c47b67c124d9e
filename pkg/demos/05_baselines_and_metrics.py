"""Compare the evolutionary selector with PCA and RFE, then score the result.

PCA transforms the whole space into a few components; RFE keeps a fixed
number of original columns by repeatedly dropping the least useful one of a
linear model.  The metrics module reports accuracy, macro precision/recall/
F1, inference time, and the memory footprint of the kept columns.
"""

from adfsa import (
    ClassifierSpec,
    FeatureMatrix,
    GAConfig,
    SyntheticSpec,
    confusion,
    feature_memory_kb,
    fit,
    generate_synthetic,
    measure_inference_time,
    pca_fit,
    pca_project,
    predict,
    prf_scores,
    rfe_select,
    run_adfsa,
    standardize,
    train_test_split,
)


def evaluate(name, X_tr, y_tr, X_te, y_te, n_kept):
    clf = ClassifierSpec(kind="knn")
    model = fit(clf, X_tr, y_tr)
    rep = prf_scores(confusion(y_te.labels, predict(model, X_te),
                               y_te.n_classes))
    ms = measure_inference_time(model, X_te, repeats=5)
    kb = feature_memory_kb(X_tr.n_samples, n_kept)
    print(f"{name:>8}: acc {rep.accuracy:.3f}  macro-F1 {rep.macro_f1:.3f}  "
          f"{n_kept:>2} cols  {kb:7.1f} KB  {ms:6.2f} ms")


def main():
    spec = SyntheticSpec(n_samples=250, n_features=24, n_informative=4,
                         n_redundant=6, n_classes=3, noise_std=0.5)
    X, y, informative = generate_synthetic(spec, seed=9)
    (X_tr, y_tr), (X_te, y_te) = train_test_split(X, y, 0.2, seed=9)
    X_tr, X_te, _, _ = standardize(X_tr, X_te)
    print(f"planted: {informative}\n")

    evaluate("none", X_tr, y_tr, X_te, y_te, 24)

    pca = pca_fit(X_tr, 4)
    evaluate("pca", pca_project(pca, X_tr), y_tr,
             pca_project(pca, X_te), y_te, 4)

    rfe = rfe_select(X_tr, y_tr, 4)
    evaluate("rfe", FeatureMatrix(X_tr.values[:, rfe.bits]), y_tr,
             FeatureMatrix(X_te.values[:, rfe.bits]), y_te, rfe.popcount)
    print(f"     rfe kept: {rfe.indices()}")

    config = GAConfig(population_size=20, n_generations=15,
                      evaluator=ClassifierSpec(kind="knn"), seed=9)
    sel = run_adfsa(X_tr, y_tr, config).best_subset
    evaluate("adfsa", FeatureMatrix(X_tr.values[:, sel.bits]), y_tr,
             FeatureMatrix(X_te.values[:, sel.bits]), y_te, sel.popcount)
    print(f"   adfsa kept: {sel.indices()}")


if __name__ == "__main__":
    main()
