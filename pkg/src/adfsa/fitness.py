"""Ensemble fitness for evolutionary feature selection.

The score of a candidate subset S combines four components,

    total = alpha * f_acc - beta * f_red + gamma * f_uni - delta * f_comp

where f_acc is cross-validated accuracy on the active columns, f_red counts
highly correlated pairs among the selected features, f_uni rewards subsets
never evaluated before, and f_comp penalizes subset size.  The weights follow
a linear schedule over generations (exploration early, accuracy and
compactness late) and/or adapt when the search stagnates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierSpec, cross_val_accuracy
from .data import FeatureMatrix, LabelVector


@dataclass(frozen=True)
class FeatureSubset:
    """Fixed-length bit vector over feature indices; the GA individual."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 1 or bits.size < 1:
            raise ValueError("bits must be a non-empty 1-D vector")
        object.__setattr__(self, "bits", bits)
        bits.setflags(write=False)

    @classmethod
    def from_indices(cls, indices, n_features: int) -> "FeatureSubset":
        bits = np.zeros(n_features, dtype=bool)
        bits[list(indices)] = True
        return cls(bits)

    @classmethod
    def full(cls, n_features: int) -> "FeatureSubset":
        return cls(np.ones(n_features, dtype=bool))

    @property
    def n_features(self) -> int:
        return self.bits.size

    @property
    def popcount(self) -> int:
        return int(self.bits.sum())

    def indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.bits)]

    def encoding(self) -> bytes:
        """Canonical encoding: two subsets are equal iff encodings match."""
        return np.packbits(self.bits).tobytes()

    def __eq__(self, other):
        return isinstance(other, FeatureSubset) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.encoding())


@dataclass(frozen=True)
class FitnessWeights:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)


START_WEIGHTS = FitnessWeights(0.4, 0.3, 0.3, 0.2)


@dataclass(frozen=True)
class FitnessBreakdown:
    f_acc: float
    f_red: float
    f_uni: float
    f_comp: float
    total: float
    weights_used: FitnessWeights


class EvaluationHistory:
    """Set of subset encodings already evaluated, by generation of insertion.

    Uniqueness queries run against an immutable snapshot taken at a
    generation boundary, so evaluation order within a generation cannot
    change results.  ``repeats`` counts insertions of already-seen subsets
    (a diversity diagnostic).
    """

    def __init__(self):
        self._seen: dict[bytes, int] = {}
        self.repeats = 0

    def __len__(self) -> int:
        return len(self._seen)

    def __contains__(self, subset: FeatureSubset) -> bool:
        return subset.encoding() in self._seen

    def snapshot(self) -> frozenset:
        return frozenset(self._seen)

    def insert_all(self, subsets, generation: int) -> None:
        for s in subsets:
            enc = s.encoding()
            if enc in self._seen:
                self.repeats += 1
            else:
                self._seen[enc] = generation


def pearson(x, y) -> float:
    """Pearson correlation; 0 if either vector has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D vectors of equal length")
    if x.size < 2:
        raise ValueError("need at least 2 points")
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt((xd @ xd) * (yd @ yd))
    if denom == 0.0:
        return 0.0
    return float(np.clip(xd @ yd / denom, -1.0, 1.0))


def correlation_matrix(X: FeatureMatrix) -> np.ndarray:
    """Pairwise feature correlations with the zero-variance convention.

    Precomputed once per run so subset redundancy lookups are O(m^2).
    """
    V = X.values
    Vd = V - V.mean(axis=0)
    norms = np.sqrt((Vd * Vd).sum(axis=0))
    safe = np.where(norms == 0.0, 1.0, norms)
    R = (Vd / safe).T @ (Vd / safe)
    R[norms == 0.0, :] = 0.0
    R[:, norms == 0.0] = 0.0
    np.clip(R, -1.0, 1.0, out=R)
    return R


def f_red(X: FeatureMatrix | None, subset: FeatureSubset, t: float = 0.7,
          corr: np.ndarray | None = None) -> float:
    """Fraction-style redundancy: count of selected pairs with |r| > t,
    normalized by m*(m-1) where m is the subset size (max value 0.5).

    Zero when fewer than two features are selected.
    """
    idx = np.flatnonzero(subset.bits)
    m = idx.size
    if m <= 1:
        return 0.0
    if corr is None:
        corr = correlation_matrix(X)
    sub = np.abs(corr[np.ix_(idx, idx)])
    hits = int((np.triu(sub, k=1) > t).sum())
    return hits / (m * (m - 1))


def f_uni(subset: FeatureSubset, history) -> int:
    """1 iff the subset is absent from the history snapshot (read-only)."""
    seen = history.snapshot() if isinstance(history, EvaluationHistory) else history
    return 0 if subset.encoding() in seen else 1


def f_comp(subset: FeatureSubset, n_total: int) -> float:
    """Selected fraction |S| / n."""
    if n_total < 1:
        raise ValueError("n_total must be >= 1")
    return subset.popcount / n_total


def schedule_weights(g: int, G: int) -> FitnessWeights:
    """Linear weight schedule over normalized progress p = g / G."""
    if not 1 <= g <= G:
        raise ValueError(f"generation {g} outside [1, {G}]")
    p = g / G
    return FitnessWeights(
        alpha=0.4 + 0.6 * p,
        beta=0.3 - 0.2 * p,
        gamma=0.3 - 0.2 * p,
        delta=0.2 + 0.1 * p,
    )


def ensemble_fitness(X: FeatureMatrix, y: LabelVector, subset: FeatureSubset,
                     weights: FitnessWeights, history,
                     evaluator: ClassifierSpec | None = None,
                     k_folds: int = 5, t: float = 0.7, seed: int = 0,
                     corr: np.ndarray | None = None,
                     acc_red_cache: dict | None = None) -> FitnessBreakdown:
    """Evaluate one subset; returns the full component breakdown.

    ``acc_red_cache`` optionally memoizes (f_acc, f_red) per subset encoding;
    results are identical with the cache on or off because both components
    depend only on the subset for fixed data, evaluator, folds, and seed.
    """
    if subset.popcount < 1:
        raise ValueError("subset must select at least one feature")
    evaluator = evaluator or ClassifierSpec()
    enc = subset.encoding()
    if acc_red_cache is not None and enc in acc_red_cache:
        acc, red = acc_red_cache[enc]
    else:
        acc = cross_val_accuracy(X, y, subset, evaluator, k=k_folds, seed=seed)
        red = f_red(X, subset, t=t, corr=corr)
        if acc_red_cache is not None:
            acc_red_cache[enc] = (acc, red)
    uni = f_uni(subset, history)
    comp = f_comp(subset, subset.n_features)
    total = (weights.alpha * acc - weights.beta * red
             + weights.gamma * uni - weights.delta * comp)
    return FitnessBreakdown(acc, red, uni, comp, total, weights)
