"""Evolutionary feature selection with an adaptive ensemble fitness,
plus the wrapper classifiers, PCA/RFE baselines, and benchmark harness
used to compare them."""

from .baselines import PcaModel, pca_fit, pca_project, rfe_select
from .classifiers import ClassifierSpec, TrainedModel, cross_val_accuracy, fit, predict
from .data import (
    DataError,
    FeatureMatrix,
    FoldAssignment,
    LabelVector,
    SyntheticSpec,
    generate_synthetic,
    load_features_csv,
    standardize,
    stratified_kfold,
    train_test_split,
)
from .evolve import (
    AblationConfig,
    GAConfig,
    GAResult,
    StagnationConfig,
    brute_force_best,
    evolve_step,
    init_population,
    run_adfsa,
    stagnation_adjust,
)
from .fitness import (
    START_WEIGHTS,
    EvaluationHistory,
    FeatureSubset,
    FitnessBreakdown,
    FitnessWeights,
    ensemble_fitness,
    f_comp,
    f_red,
    f_uni,
    pearson,
    schedule_weights,
)
from .metrics import (
    ConfusionMatrix,
    MetricReport,
    confusion,
    feature_memory_kb,
    measure_inference_time,
    prf_scores,
)

__version__ = "0.1.0"
