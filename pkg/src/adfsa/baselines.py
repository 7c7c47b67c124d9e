"""PCA and recursive feature elimination comparison methods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierSpec, fit
from .data import DataError, FeatureMatrix, LabelVector
from .fitness import FeatureSubset


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray                # (d,)
    components: np.ndarray          # (k, d), rows orthonormal
    explained_variance: np.ndarray  # (k,), non-increasing
    total_variance: float

    def explained_variance_ratio(self) -> np.ndarray:
        return self.explained_variance / self.total_variance


def pca_fit(X: FeatureMatrix, k: int) -> PcaModel:
    """Top-k eigenvectors of the covariance of centered X.

    Deterministic: symmetric eigensolver, components sorted by eigenvalue
    descending, and each component's largest-magnitude entry made positive.
    """
    n, d = X.values.shape
    if not 1 <= k <= min(n, d):
        raise DataError(f"k={k} outside [1, {min(n, d)}]")
    centered = X.values - X.values.mean(axis=0)
    cov = centered.T @ centered / n
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:k]
    comps = eigvecs[:, order].T
    # sign convention: largest-magnitude entry of each component positive
    for row in comps:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    variances = np.maximum(eigvals[order], 0.0)
    return PcaModel(X.values.mean(axis=0), comps, variances,
                    float(np.maximum(eigvals, 0.0).sum()))


def pca_project(model: PcaModel, X: FeatureMatrix) -> FeatureMatrix:
    if X.n_features != model.mean.size:
        raise DataError(f"expected {model.mean.size} features, got {X.n_features}")
    return FeatureMatrix((X.values - model.mean) @ model.components.T)


def pca_save_csv(model: PcaModel, path) -> None:
    """Mean, explained variance, and component rows as labeled CSV blocks."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("mean," + ",".join(repr(float(v)) for v in model.mean) + "\n")
        fh.write("explained_variance,"
                 + ",".join(repr(float(v)) for v in model.explained_variance) + "\n")
        fh.write(f"total_variance,{float(model.total_variance)!r}\n")
        for i, row in enumerate(model.components):
            fh.write(f"component_{i}," + ",".join(repr(float(v)) for v in row) + "\n")


def rfe_select(X: FeatureMatrix, y: LabelVector, k_target: int,
               step: int | None = None,
               spec: ClassifierSpec | None = None) -> FeatureSubset:
    """Iteratively drop the lowest-importance features of a linear model.

    Importance of a feature = sum over classes of |weight|.  Each round
    removes ``step`` features (default: 10% of those remaining, at least 1),
    never overshooting k_target, so the surviving sets are nested.
    """
    spec = spec or ClassifierSpec(kind="logreg")
    if spec.kind not in ("logreg", "linear_svm"):
        raise DataError("RFE needs a linear model (logreg or linear_svm)")
    if not 1 <= k_target <= X.n_features:
        raise DataError(f"k_target={k_target} outside [1, {X.n_features}]")
    active = np.ones(X.n_features, dtype=bool)
    while active.sum() > k_target:
        cols = np.flatnonzero(active)
        model = fit(spec, FeatureMatrix(X.values[:, cols]), y)
        importance = np.abs(model.weights).sum(axis=0)
        n_drop = step if step is not None else max(1, cols.size // 10)
        n_drop = min(n_drop, cols.size - k_target)
        # stable ranking: ties drop the higher original index first
        ranked = sorted(range(cols.size), key=lambda i: (importance[i], -cols[i]))
        active[cols[ranked[:n_drop]]] = False
    return FeatureSubset(active)
