"""Feature matrices, CSV ingestion, stratified splits, and synthetic data.

All operations are pure given their inputs and an explicit seed, so they are
safe to call from multiple threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Raised when input data violates a documented precondition."""


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense numeric table: rows are samples, columns are features."""

    values: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise DataError(f"feature matrix must be 2-D, got shape {values.shape}")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"feature matrix must be non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataError("feature matrix contains non-finite values")
        if self.feature_names is not None and len(self.feature_names) != values.shape[1]:
            raise DataError("feature_names length does not match column count")
        object.__setattr__(self, "values", values)
        values.setflags(write=False)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LabelVector:
    """Integer class ids 0..n_classes-1, one per sample."""

    labels: np.ndarray
    n_classes: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.ndim != 1:
            raise DataError("labels must be 1-D")
        if self.n_classes < 1:
            raise DataError("n_classes must be positive")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
            raise DataError("label id out of range")
        present = np.unique(labels)
        if present.size != self.n_classes:
            missing = sorted(set(range(self.n_classes)) - set(present.tolist()))
            raise DataError(f"classes with zero samples: {missing}")
        object.__setattr__(self, "labels", labels)
        labels.setflags(write=False)

    def __len__(self) -> int:
        return self.labels.size

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic dataset with planted informative columns."""

    n_samples: int
    n_features: int
    n_informative: int
    n_redundant: int = 0
    n_classes: int = 2
    noise_std: float = 0.5
    redundancy_rho: float = 0.6

    def __post_init__(self):
        if self.n_informative + self.n_redundant > self.n_features:
            raise DataError("n_informative + n_redundant exceeds n_features")
        if self.n_classes < 2:
            raise DataError("n_classes must be >= 2")
        if self.n_informative < 1:
            raise DataError("n_informative must be >= 1")
        if self.noise_std < 0:
            raise DataError("noise_std must be >= 0")
        if not 0.0 < self.redundancy_rho <= 1.0:
            raise DataError("redundancy_rho must be in (0, 1]")
        if self.n_samples < self.n_classes:
            raise DataError("need at least one sample per class")


@dataclass(frozen=True)
class FoldAssignment:
    """Maps each sample to a cross-validation fold 0..k-1."""

    fold_of_sample: np.ndarray
    k: int

    def __post_init__(self):
        folds = np.asarray(self.fold_of_sample, dtype=int)
        counts = np.bincount(folds, minlength=self.k)
        if counts.size > self.k or np.any(counts == 0):
            raise DataError("every fold must be non-empty")
        object.__setattr__(self, "fold_of_sample", folds)
        folds.setflags(write=False)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of_sample == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of_sample != fold)


def load_features_csv(path, label_column) -> tuple[FeatureMatrix, LabelVector, dict]:
    """Load a feature CSV with a header row and one label column.

    ``label_column`` is a header name or a 0-based column index.  Class ids
    are assigned by first appearance of each distinct label string; the
    mapping is returned as the third element.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        if isinstance(label_column, int):
            label_idx = label_column
            if not 0 <= label_idx < len(header):
                raise DataError(f"label column index {label_idx} out of range")
        else:
            try:
                label_idx = header.index(label_column)
            except ValueError:
                raise DataError(f"label column {label_column!r} not in header") from None
        feature_names = [h for i, h in enumerate(header) if i != label_idx]

        rows: list[list[float]] = []
        labels: list[int] = []
        mapping: dict[str, int] = {}
        for r, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise DataError(f"ragged row {r}: expected {len(header)} cells, got {len(row)}")
            vals = []
            for c, cell in enumerate(row):
                if c == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    v = float("nan")
                if not np.isfinite(v):
                    raise DataError(f"non-numeric cell at row {r}, column {c}")
                vals.append(v)
            rows.append(vals)
            key = row[label_idx]
            if key not in mapping:
                mapping[key] = len(mapping)
            labels.append(mapping[key])
    if not rows:
        raise DataError(f"{path} has no data rows")
    X = FeatureMatrix(np.array(rows, dtype=float), feature_names=feature_names)
    y = LabelVector(np.array(labels, dtype=int), n_classes=len(mapping))
    return X, y, mapping


def train_test_split(X: FeatureMatrix, y: LabelVector, test_fraction: float, seed: int):
    """Stratified train/test split, deterministic given the seed.

    Per-class test counts are round(class_count * test_fraction), clamped so
    neither side of any class is empty.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    counts = y.class_counts()
    if counts.min() < 2:
        raise DataError("every class needs at least 2 samples to split")
    rng = np.random.default_rng(seed)
    test_mask = np.zeros(len(y), dtype=bool)
    for c in range(y.n_classes):
        idx = np.flatnonzero(y.labels == c)
        n_test = int(round(idx.size * test_fraction))
        n_test = min(max(n_test, 1), idx.size - 1)
        chosen = rng.permutation(idx)[:n_test]
        test_mask[chosen] = True
    train_idx = np.flatnonzero(~test_mask)
    test_idx = np.flatnonzero(test_mask)
    X_train = FeatureMatrix(X.values[train_idx], feature_names=X.feature_names)
    X_test = FeatureMatrix(X.values[test_idx], feature_names=X.feature_names)
    y_train = LabelVector(y.labels[train_idx], y.n_classes)
    y_test = LabelVector(y.labels[test_idx], y.n_classes)
    return (X_train, y_train), (X_test, y_test)


def stratified_kfold(y: LabelVector, k: int, seed: int) -> FoldAssignment:
    """Assign samples to k folds preserving class proportions."""
    if k < 2:
        raise DataError(f"k must be >= 2, got {k}")
    counts = y.class_counts()
    if counts.min() < k:
        short = int(np.argmin(counts))
        raise DataError(f"class {short} has {counts.min()} samples, fewer than k={k}")
    rng = np.random.default_rng(seed)
    folds = np.empty(len(y), dtype=int)
    offset = 0
    for c in range(y.n_classes):
        idx = rng.permutation(np.flatnonzero(y.labels == c))
        # rotate the starting fold per class so fold sizes stay balanced overall
        folds[idx] = (np.arange(idx.size) + offset) % k
        offset += idx.size
    return FoldAssignment(folds, k)


def standardize(X_train: FeatureMatrix, *others: FeatureMatrix):
    """Column-wise z-scoring fitted on the train matrix (population std).

    Zero-variance columns get std recorded as 1 and map to all zeros.
    Returns (standardized train, *standardized others, mean, std).
    """
    mean = X_train.values.mean(axis=0)
    std = X_train.values.std(axis=0)  # population std
    std = np.where(std == 0.0, 1.0, std)
    out = [FeatureMatrix((m.values - mean) / std, feature_names=m.feature_names)
           for m in (X_train, *others)]
    return (*out, mean, std)


def generate_synthetic(spec: SyntheticSpec, seed: int):
    """Generate a dataset with planted informative columns.

    Informative columns are class-conditional Gaussians with well separated
    class means and within-class std ``noise_std``.  Each redundant column is
    rho * (a random informative column) + Gaussian noise scaled so the sample
    correlation is about ``redundancy_rho`` (exactly +/-1 when rho = 1).
    Remaining columns are pure standard normal noise.

    Returns (FeatureMatrix, LabelVector, sorted list of informative indices).
    """
    rng = np.random.default_rng(seed)
    n, d = spec.n_samples, spec.n_features
    # balanced labels, shuffled
    labels = rng.permutation(np.arange(n) % spec.n_classes)

    perm = rng.permutation(d)
    informative = np.sort(perm[: spec.n_informative])
    redundant = np.sort(perm[spec.n_informative : spec.n_informative + spec.n_redundant])

    X = rng.standard_normal((n, d))
    # class means spread far apart relative to noise_std
    means = 2.0 * rng.standard_normal((spec.n_classes, spec.n_informative))
    X[:, informative] = means[labels] + spec.noise_std * rng.standard_normal((n, spec.n_informative))

    rho = spec.redundancy_rho
    for j in redundant:
        src = X[:, rng.choice(informative)]
        col = rho * src
        if rho < 1.0:
            # corr(rho*x + s*e, x) = rho / sqrt(rho^2 + (s/std_x)^2)
            s = np.sqrt(1.0 - rho * rho) * src.std()
            col = col + s * rng.standard_normal(n)
        X[:, j] = col

    return (
        FeatureMatrix(X),
        LabelVector(labels, spec.n_classes),
        [int(i) for i in informative],
    )
