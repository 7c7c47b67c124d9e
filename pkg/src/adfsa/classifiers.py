"""Lightweight wrapper classifiers: KNN, softmax logistic regression, and a
one-vs-rest linear SVM trained by hinge subgradient descent.

Training is deterministic: linear models start from zero weights and use
full-batch updates, so fit(spec, X, y) is a pure function of its arguments.
Ties (nearest-neighbor votes, argmax over class scores) always break toward
the smallest class id.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace

import numpy as np

from .data import DataError, FeatureMatrix, LabelVector, stratified_kfold

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier to use and its hyperparameters."""

    kind: str = "linear_svm"  # one of {"knn", "logreg", "linear_svm"}
    knn_k: int = 5
    learning_rate: float = 0.1
    epochs: int = 300
    l2: float = 1e-4          # logreg weight decay
    svm_lambda: float = 1e-3  # linear_svm regularization

    def __post_init__(self):
        if self.kind not in ("knn", "logreg", "linear_svm"):
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.knn_k < 1 or self.knn_k % 2 == 0:
            raise ValueError("knn_k must be a positive odd integer")
        if min(self.learning_rate, self.epochs, self.l2, self.svm_lambda) <= 0:
            raise ValueError("classifier hyperparameters must be positive")


@dataclass(frozen=True)
class TrainedModel:
    spec: ClassifierSpec
    n_classes: int
    n_features: int
    train_accuracy: float
    # linear models
    weights: np.ndarray | None = None  # (C, d)
    bias: np.ndarray | None = None     # (C,)
    # knn
    train_X: np.ndarray | None = None
    train_y: np.ndarray | None = None


def _scores(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    return X @ model.weights.T + model.bias


def _fit_logreg(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray, n_classes: int):
    n, d = X.shape
    W = np.zeros((n_classes, d))
    b = np.zeros(n_classes)
    Y = np.eye(n_classes)[y]  # one-hot (n, C)
    for _ in range(spec.epochs):
        z = X @ W.T + b
        z -= z.max(axis=1, keepdims=True)
        p = np.exp(z)
        p /= p.sum(axis=1, keepdims=True)
        g = (p - Y) / n  # (n, C)
        W -= spec.learning_rate * (g.T @ X + spec.l2 * W)
        b -= spec.learning_rate * g.sum(axis=0)
    return W, b


def _fit_linear_svm(spec: ClassifierSpec, X: np.ndarray, y: np.ndarray, n_classes: int):
    # one-vs-rest hinge loss, all classes trained jointly as a (C, d) matrix
    n, d = X.shape
    W = np.zeros((n_classes, d))
    b = np.zeros(n_classes)
    T = np.where(np.eye(n_classes, dtype=bool)[y], 1.0, -1.0)  # (n, C) targets
    for _ in range(spec.epochs):
        margins = T * (X @ W.T + b)
        active = (margins < 1.0) * T  # (n, C) subgradient mask
        W -= spec.learning_rate * (spec.svm_lambda * W - active.T @ X / n)
        b += spec.learning_rate * active.sum(axis=0) / n
    return W, b


def fit(spec: ClassifierSpec, X: FeatureMatrix, y: LabelVector) -> TrainedModel:
    if len(y) != X.n_samples:
        raise DataError("X and y lengths differ")
    if y.n_classes < 2:
        raise DataError("need at least 2 classes to fit")
    if spec.kind == "knn":
        if spec.knn_k > X.n_samples:
            raise DataError(f"knn_k={spec.knn_k} exceeds n_train={X.n_samples}")
        model = TrainedModel(spec, y.n_classes, X.n_features, 0.0,
                             train_X=X.values, train_y=y.labels)
    else:
        trainer = _fit_logreg if spec.kind == "logreg" else _fit_linear_svm
        W, b = trainer(spec, X.values, y.labels, y.n_classes)
        model = TrainedModel(spec, y.n_classes, X.n_features, 0.0, weights=W, bias=b)
    acc = float(np.mean(predict(model, X) == y.labels))
    return replace(model, train_accuracy=acc)


def _knn_predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    # The k nearest are ordered by (distance, label): every strictly closer
    # point is in, and ties at the k-th distance admit smaller labels first,
    # so equal-distance neighbors resolve in a row-order-independent way.
    k = model.spec.knn_k
    d2 = _sq_dists(X, model.train_X)
    dk = np.partition(d2, k - 1, axis=1)[:, k - 1:k]  # k-th smallest distance
    onehot = np.eye(model.n_classes)[model.train_y]   # (n_train, C)
    votes = (d2 < dk) @ onehot                        # strictly closer, per class
    at_boundary = (d2 == dk) @ onehot                 # tied at the k-th distance
    remaining = k - votes.sum(axis=1, keepdims=True)
    already = np.cumsum(at_boundary, axis=1) - at_boundary
    votes += np.clip(remaining - already, 0.0, at_boundary)
    return np.argmax(votes, axis=1)  # argmax returns smallest id on ties


def _sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d2 = A @ B.T
    d2 *= -2.0
    d2 += (A * A).sum(axis=1)[:, None]
    d2 += (B * B).sum(axis=1)[None, :]
    np.maximum(d2, 0.0, out=d2)
    return d2


def predict(model: TrainedModel, X: FeatureMatrix) -> np.ndarray:
    if X.n_features != model.n_features:
        raise DataError(f"expected {model.n_features} features, got {X.n_features}")
    if model.spec.kind == "knn":
        return _knn_predict(model, X.values)
    return np.argmax(_scores(model, X.values), axis=1)


def cross_val_accuracy(X: FeatureMatrix, y: LabelVector, subset, spec: ClassifierSpec,
                       k: int = 5, seed: int = 0) -> float:
    """Mean held-out accuracy over k stratified folds on the active columns.

    ``subset`` is anything with boolean ``mask`` semantics over features
    (a FeatureSubset) or None for all columns.
    """
    mask = getattr(subset, "bits", subset)
    if mask is None:
        cols = np.arange(X.n_features)
    else:
        cols = np.flatnonzero(np.asarray(mask, dtype=bool))
        if cols.size == 0:
            raise DataError("empty feature subset")
    folds = stratified_kfold(y, k, seed)
    accs = []
    V = X.values[:, cols]
    for f in range(k):
        tr, te = folds.train_indices(f), folds.test_indices(f)
        model = fit(spec, FeatureMatrix(V[tr]), LabelVector(y.labels[tr], y.n_classes))
        pred = predict(model, FeatureMatrix(V[te]))
        accs.append(float(np.mean(pred == y.labels[te])))
    return float(np.mean(accs))


def save_model(model: TrainedModel, path) -> None:
    """Versioned npz serialization."""
    arrays = {}
    for name in ("weights", "bias", "train_X", "train_y"):
        v = getattr(model, name)
        if v is not None:
            arrays[name] = v
    meta = json.dumps({
        "format_version": MODEL_FORMAT_VERSION,
        "spec": asdict(model.spec),
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "train_accuracy": model.train_accuracy,
    })
    np.savez(path, meta=np.array(meta), **arrays)


def load_model(path) -> TrainedModel:
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(str(z["meta"]))
        if meta["format_version"] != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format {meta['format_version']}")
        kw = {n: z[n] for n in ("weights", "bias", "train_X", "train_y") if n in z}
    return TrainedModel(ClassifierSpec(**meta["spec"]), meta["n_classes"],
                        meta["n_features"], meta["train_accuracy"], **kw)
