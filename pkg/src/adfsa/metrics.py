"""Classification metrics, inference timing, and memory footprint estimate."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .classifiers import TrainedModel, predict
from .data import DataError, FeatureMatrix


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # (C, C), rows = true class, columns = predicted

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class_precision: np.ndarray
    per_class_recall: np.ndarray
    per_class_f1: np.ndarray
    jaccard_micro: float  # TP / (TP + FP + FN), pooled over classes


def confusion(y_true, y_pred, n_classes: int) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape:
        raise DataError("y_true and y_pred lengths differ")
    if y_true.size and (min(y_true.min(), y_pred.min()) < 0
                        or max(y_true.max(), y_pred.max()) >= n_classes):
        raise DataError("label outside [0, n_classes)")
    counts = np.zeros((n_classes, n_classes), dtype=int)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


def prf_scores(cm: ConfusionMatrix) -> MetricReport:
    """Per-class one-vs-rest precision/recall/F1 plus macro averages.

    Undefined ratios (class never predicted / never present) are 0 by
    convention.  Overall accuracy is the standard trace / total.
    """
    counts = cm.counts
    if cm.total < 1:
        raise DataError("empty confusion matrix")
    tp = np.diag(counts).astype(float)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(tp + fp > 0, tp / (tp + fp), 0.0)
        recall = np.where(tp + fn > 0, tp / (tp + fn), 0.0)
        # 2TP / (2TP + FP + FN) equals the harmonic mean of P and R but
        # avoids compounding two rounded quotients
        denom = 2 * tp + fp + fn
        f1 = np.where(denom > 0, 2 * tp / np.where(denom > 0, denom, 1.0), 0.0)
    micro_denom = tp.sum() + fp.sum() + fn.sum()
    return MetricReport(
        accuracy=float(tp.sum() / cm.total),
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        per_class_precision=precision,
        per_class_recall=recall,
        per_class_f1=f1,
        jaccard_micro=float(tp.sum() / micro_denom) if micro_denom else 0.0,
    )


def measure_inference_time(model: TrainedModel, X_test: FeatureMatrix,
                           subset=None, repeats: int = 5) -> float:
    """Mean wall-clock milliseconds for one full prediction pass.

    Runs one untimed warm-up pass first.  ``subset`` restricts X_test to the
    active columns (the model must have been fitted on those columns).
    """
    if repeats < 1:
        raise DataError("repeats must be >= 1")
    if subset is not None:
        cols = np.flatnonzero(np.asarray(getattr(subset, "bits", subset), dtype=bool))
        X_test = FeatureMatrix(X_test.values[:, cols])
    predict(model, X_test)  # warm-up
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        predict(model, X_test)
        times.append(time.perf_counter() - start)
    return 1000.0 * float(np.mean(times))


def feature_memory_kb(n_samples: int, subset, bytes_per_value: int = 8) -> float:
    """Storage of the selected-feature submatrix in KB."""
    if bytes_per_value not in (4, 8):
        raise DataError("bytes_per_value must be 4 or 8")
    popcount = int(np.asarray(getattr(subset, "bits", subset), dtype=bool).sum()) \
        if not isinstance(subset, int) else subset
    return n_samples * popcount * bytes_per_value / 1024.0
