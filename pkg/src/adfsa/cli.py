"""Command-line front end: synth / select / bench / report.

Configuration lives in a single JSON file with flat sections per method
(see README for the key list).  Precedence: CLI flag > ADFSA_* environment
variable > config file > built-in default.  Exit codes: 0 success,
1 usage/config error, 2 data error, 3 internal invariant violation.

Determinism contract: everything except the timing columns is reproducible
byte for byte from (config, seed); timings go to a separate timing.csv.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .baselines import pca_fit, pca_project, pca_save_csv, rfe_select
from .classifiers import ClassifierSpec, cross_val_accuracy, fit, predict
from .data import (
    DataError,
    FeatureMatrix,
    LabelVector,
    SyntheticSpec,
    generate_synthetic,
    load_features_csv,
    standardize,
    train_test_split,
)
from .evolve import AblationConfig, GAConfig, GAResult, result_to_dict, run_adfsa
from .fitness import FeatureSubset
from .metrics import confusion, feature_memory_kb, measure_inference_time, prf_scores

METHODS = ("none", "pca", "rfe", "adfsa")
CLASSIFIERS = ("knn", "logreg", "linear_svm")
TRACE_COLUMNS = ("generation", "best_total", "mean_total", "f_acc", "f_red",
                 "f_uni", "f_comp", "alpha", "beta", "gamma", "delta",
                 "popcount_best")
REPORT_COLUMNS = ("classifier", "setting", "cv_accuracy_pct",
                  "test_accuracy_pct", "n_features", "memory_kb",
                  "macro_precision", "macro_recall", "macro_f1")


class ConfigError(ValueError):
    """Bad config file or command-line usage."""


def _env(name: str, default=None):
    return os.environ.get(f"ADFSA_{name.upper()}", default)


def load_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    return cfg


def _classifier_spec(name: str, overrides: dict | None = None) -> ClassifierSpec:
    if name not in CLASSIFIERS:
        raise ConfigError(f"unknown classifier {name!r}; pick from {CLASSIFIERS}")
    kw = {"kind": name}
    kw.update(overrides or {})
    try:
        return ClassifierSpec(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"classifier {name}: {exc}") from exc


def _ga_config(section: dict, seed: int, k_folds: int) -> GAConfig:
    section = dict(section or {})
    evaluator = _classifier_spec(section.pop("evaluator", "linear_svm"),
                                 section.pop("evaluator_params", None))
    ablation = AblationConfig(**section.pop("ablation", {}))
    section.setdefault("seed", seed)
    section.setdefault("k_folds", k_folds)
    try:
        return GAConfig(evaluator=evaluator, ablation=ablation, **section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"adfsa section: {exc}") from exc


def _load_data(cfg: dict, seed: int):
    """Returns (X, y, ground_truth_or_None)."""
    data = cfg.get("data")
    if not data:
        raise ConfigError("config needs a 'data' section")
    if "synthetic" in data:
        try:
            spec = SyntheticSpec(**data["synthetic"])
        except TypeError as exc:
            raise ConfigError(f"synthetic spec: {exc}") from exc
        X, y, truth = generate_synthetic(spec, int(data.get("seed", seed)))
        return X, y, truth
    if "features_csv" in data:
        X, y, _mapping = load_features_csv(data["features_csv"],
                                           data.get("label_column", "label"))
        return X, y, None
    raise ConfigError("data section needs 'synthetic' or 'features_csv'")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


# ---------------------------------------------------------------- commands

def cmd_synth(args) -> int:
    spec = SyntheticSpec(
        n_samples=args.samples, n_features=args.features,
        n_informative=args.informative, n_redundant=args.redundant,
        n_classes=args.classes, noise_std=args.noise_std,
        redundancy_rho=args.redundancy_rho,
    )
    X, y, truth = generate_synthetic(spec, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = [f"f{j}" for j in range(X.n_features)]
    _write_csv(out / "features.csv", header + ["label"],
               ([repr(float(v)) for v in row] + [str(lab)]
                for row, lab in zip(X.values, y.labels)))
    _write_csv(out / "labels.csv", ["label"], ([str(v)] for v in y.labels))
    (out / "ground_truth.json").write_text(
        json.dumps({"informative_indices": truth,
                    "spec": spec.__dict__, "seed": args.seed},
                   indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote features.csv, labels.csv, ground_truth.json to {out}")
    return 0


def _write_trace_csv(path: Path, result: GAResult) -> None:
    rows = []
    for r in result.trace:
        b, w = r.best_breakdown, r.weights
        rows.append([r.generation, _fmt(r.best_total), _fmt(r.mean_total),
                     _fmt(b.f_acc), _fmt(b.f_red), _fmt(b.f_uni), _fmt(b.f_comp),
                     _fmt(w.alpha), _fmt(w.beta), _fmt(w.gamma), _fmt(w.delta),
                     r.best_popcount])
    _write_csv(path, TRACE_COLUMNS, rows)


def cmd_select(args) -> int:
    cfg = load_config(args.config)
    seed = int(args.seed if args.seed is not None else _env("seed", cfg.get("seed", 0)))
    method = args.method or _env("method") or cfg.get("method", "adfsa")
    if method not in ("adfsa", "rfe", "pca"):
        raise ConfigError(f"select supports adfsa/rfe/pca, got {method!r}")
    out = Path(args.out or _env("out") or cfg.get("out", "results"))
    out.mkdir(parents=True, exist_ok=True)
    X, y, _ = _load_data(cfg, seed)
    if _standardize_on(args, cfg):
        X, _mean, _std = standardize(X)

    k_folds = int(cfg.get("split", {}).get("k_folds", 5))
    if method == "adfsa":
        ga = _ga_config(cfg.get("adfsa", {}), seed, k_folds)
        result = run_adfsa(X, y, ga)
        (out / "subset_adfsa.json").write_text(
            json.dumps(result_to_dict(result, ga), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        _write_trace_csv(out / "trace_adfsa.csv", result)
        print(f"adfsa selected {result.best_subset.popcount} features -> {out}")
    elif method == "rfe":
        rfe_cfg = cfg.get("rfe", {})
        spec = _classifier_spec(rfe_cfg.get("estimator", "logreg"))
        subset = rfe_select(X, y, int(rfe_cfg.get("k", 50)),
                            step=rfe_cfg.get("step"), spec=spec)
        (out / "subset_rfe.json").write_text(
            json.dumps({"selected_indices": subset.indices(),
                        "method": "rfe", "k": subset.popcount, "seed": seed},
                       indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"rfe selected {subset.popcount} features -> {out}")
    else:
        model = pca_fit(X, int(cfg.get("pca", {}).get("k", 50)))
        pca_save_csv(model, out / "pca_model.csv")
        print(f"pca fitted {model.components.shape[0]} components -> {out}")
    return 0


def _standardize_on(args, cfg) -> bool:
    if getattr(args, "standardize", None) is not None:
        return args.standardize
    env = _env("standardize")
    if env is not None:
        return env.lower() in ("1", "true", "yes")
    return bool(cfg.get("standardize", True))


def _prepare_setting(method: str, cfg: dict, X_tr, y_tr, X_te, seed: int,
                     k_folds: int, ablation: AblationConfig | None = None):
    """Returns (setting_name, train rep, test rep, n_features, subset_or_None,
    extra outputs dict)."""
    if method == "none":
        return "none", X_tr, X_te, X_tr.n_features, FeatureSubset.full(X_tr.n_features), {}
    if method == "pca":
        k = int(cfg.get("pca", {}).get("k", 50))
        model = pca_fit(X_tr, k)
        return "pca", pca_project(model, X_tr), pca_project(model, X_te), k, None, \
            {"pca_model": model}
    if method == "rfe":
        rfe_cfg = cfg.get("rfe", {})
        spec = _classifier_spec(rfe_cfg.get("estimator", "logreg"))
        subset = rfe_select(X_tr, y_tr, int(rfe_cfg.get("k", 50)),
                            step=rfe_cfg.get("step"), spec=spec)
        cols = subset.indices()
        return "rfe", FeatureMatrix(X_tr.values[:, cols]), \
            FeatureMatrix(X_te.values[:, cols]), subset.popcount, subset, \
            {"subset": subset}
    if method == "adfsa":
        ga = _ga_config(cfg.get("adfsa", {}), seed, k_folds)
        name = "adfsa"
        if ablation is not None:
            ga = replace(ga, ablation=ablation)
            tags = []
            if not ablation.use_uniqueness:
                tags.append("no_uniq")
            if not ablation.use_complexity:
                tags.append("no_comp")
            if tags:
                name = "adfsa_" + "_".join(tags)
        result = run_adfsa(X_tr, y_tr, ga)
        subset = result.best_subset
        cols = subset.indices()
        return name, FeatureMatrix(X_tr.values[:, cols]), \
            FeatureMatrix(X_te.values[:, cols]), subset.popcount, subset, \
            {"subset": subset, "result": result, "ga_config": ga}
    raise ConfigError(f"unknown method {method!r}; pick from {METHODS}")


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    seed = int(args.seed if args.seed is not None else _env("seed", cfg.get("seed", 0)))
    out = Path(args.out or _env("out") or cfg.get("out", "results"))
    out.mkdir(parents=True, exist_ok=True)
    methods = [args.method] if args.method else cfg.get("methods", list(METHODS))
    classifiers = [args.classifier] if args.classifier else \
        cfg.get("classifiers", list(CLASSIFIERS))
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; pick from {METHODS}")
    split = cfg.get("split", {})
    test_fraction = float(split.get("test_fraction", 0.2))
    k_folds = int(split.get("k_folds", 5))
    repeats = int(cfg.get("timing_repeats", 5))

    X, y, truth = _load_data(cfg, seed)
    (tr, te) = train_test_split(X, y, test_fraction, seed)
    X_tr, y_tr = tr
    X_te, y_te = te
    if _standardize_on(args, cfg):
        X_tr, X_te, _mean, _std = standardize(X_tr, X_te)

    # expand adfsa into one row per requested ablation variant
    settings = []
    for method in methods:
        if method == "adfsa" and cfg.get("ablation_variants"):
            for variant in cfg["ablation_variants"]:
                settings.append((method, AblationConfig(**variant)))
        else:
            settings.append((method, None))

    report_rows, timing_rows, failures = [], [], []
    prepared = []
    for method, ablation in settings:
        try:
            prepared.append(_prepare_setting(method, cfg, X_tr, y_tr, X_te,
                                             seed, k_folds, ablation))
        except (DataError, ValueError) as exc:
            failures.append((method, str(exc)))

    for name, R_tr, R_te, n_feat, subset, extra in prepared:
        if "result" in extra:
            (out / f"subset_{name}.json").write_text(
                json.dumps(result_to_dict(extra["result"], extra["ga_config"]),
                           indent=2, sort_keys=True) + "\n", encoding="utf-8")
            _write_trace_csv(out / f"trace_{name}.csv", extra["result"])
        elif "subset" in extra:
            (out / f"subset_{name}.json").write_text(
                json.dumps({"selected_indices": extra["subset"].indices(),
                            "method": name, "seed": seed},
                           indent=2, sort_keys=True) + "\n", encoding="utf-8")
        elif "pca_model" in extra:
            pca_save_csv(extra["pca_model"], out / "pca_model.csv")
        for clf_name in classifiers:
            spec = _classifier_spec(clf_name, cfg.get("classifier_params", {}).get(clf_name))
            cv_acc = cross_val_accuracy(R_tr, y_tr, None, spec, k=k_folds, seed=seed)
            t0 = time.perf_counter()
            model = fit(spec, R_tr, y_tr)
            train_ms = 1000.0 * (time.perf_counter() - t0)
            pred = predict(model, R_te)
            rep = prf_scores(confusion(y_te.labels, pred, y.n_classes))
            infer_ms = measure_inference_time(model, R_te, repeats=repeats)
            mem = feature_memory_kb(R_tr.n_samples + R_te.n_samples, n_feat)
            report_rows.append([clf_name, name, _fmt(100.0 * cv_acc),
                                _fmt(100.0 * rep.accuracy), n_feat, _fmt(mem),
                                _fmt(rep.macro_precision), _fmt(rep.macro_recall),
                                _fmt(rep.macro_f1)])
            timing_rows.append([clf_name, name, _fmt(train_ms), _fmt(infer_ms)])
    for method, msg in failures:
        report_rows.append(["-", method, "FAILED", msg.replace(",", ";"),
                            "-", "-", "-", "-", "-"])

    _write_csv(out / "report.csv", REPORT_COLUMNS, report_rows)
    _write_csv(out / "timing.csv",
               ("classifier", "setting", "train_ms", "avg_inference_ms"),
               timing_rows)
    _write_percent_change(out, report_rows)
    _write_markdown(out, report_rows)
    (out / "config_echo.json").write_text(
        json.dumps({"config": cfg, "seed": seed,
                    "standardize": _standardize_on(args, cfg),
                    "ground_truth": truth}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    print(f"bench complete: {len(report_rows)} rows -> {out}")
    return 0


def _write_percent_change(out: Path, report_rows) -> None:
    baseline = {r[0]: r for r in report_rows if r[1] == "none"}
    rows = []
    for r in report_rows:
        if r[1] == "none" or r[0] not in baseline:
            continue
        base = baseline[r[0]]
        def pct(i):
            b, v = float(base[i]), float(r[i])
            return _fmt(100.0 * (v - b) / b) if b else "nan"
        rows.append([r[0], r[1], pct(2), pct(3),
                     _fmt(100.0 * (float(r[4]) - float(base[4])) / float(base[4])),
                     pct(5)])
    _write_csv(out / "percent_change.csv",
               ("classifier", "setting", "cv_accuracy_pct_change",
                "test_accuracy_pct_change", "n_features_pct_change",
                "memory_pct_change"), rows)


def _write_markdown(out: Path, report_rows) -> None:
    lines = ["# Benchmark report", "",
             "Random Forest is intentionally absent from the classifier set.", "",
             "| " + " | ".join(REPORT_COLUMNS) + " |",
             "|" + "---|" * len(REPORT_COLUMNS)]
    for r in report_rows:
        lines.append("| " + " | ".join(str(v) for v in r) + " |")
    lines.append("")
    lines.append("Timing columns live in timing.csv (machine-dependent, "
                 "excluded from determinism checks).")
    (out / "report.md").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_report(args) -> int:
    out = Path(args.out or _env("out") or args.results)
    results = Path(args.results)
    echo_path = results / "config_echo.json"
    if not echo_path.exists():
        raise DataError(f"no config_echo.json in {results}; run bench first")
    echo = json.loads(echo_path.read_text(encoding="utf-8"))
    cfg, seed = echo["config"], int(echo["seed"])
    X, y, _ = _load_data(cfg, seed)
    if echo.get("standardize", True):
        X, _mean, _std = standardize(X)

    subset_file = next((p for p in (results / "subset_adfsa.json",
                                    results / "subset_rfe.json") if p.exists()), None)
    if subset_file is None:
        raise DataError(f"no subset_*.json in {results}")
    indices = json.loads(subset_file.read_text(encoding="utf-8"))["selected_indices"]
    sub = FeatureMatrix(X.values[:, indices])
    model = pca_fit(sub, k=min(2, sub.n_features))
    emb = pca_project(model, sub).values
    if emb.shape[1] == 1:
        emb = np.column_stack([emb, np.zeros(emb.shape[0])])
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "embedding.csv", ("x", "y", "label"),
               ([repr(float(row[0])), repr(float(row[1])), str(lab)]
                for row, lab in zip(emb, y.labels)))

    lines = ["# Experiment summary", "",
             f"Source subset: {subset_file.name} "
             f"({len(indices)} of {X.n_features} features)", ""]
    report_csv = results / "report.csv"
    if report_csv.exists():
        lines.append("## Benchmark table")
        lines.append("")
        lines.append("```")
        lines.append(report_csv.read_text(encoding="utf-8").rstrip())
        lines.append("```")
    (out / "summary.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"report written to {out}")
    return 0


# ------------------------------------------------------------------- main

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adfsa", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset with planted features")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--features", type=int, default=128)
    p.add_argument("--informative", type=int, default=7)
    p.add_argument("--redundant", type=int, default=20)
    p.add_argument("--classes", type=int, default=11)
    p.add_argument("--noise-std", type=float, default=0.5)
    p.add_argument("--redundancy-rho", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    p.add_argument("--out", default=_env("out", "synth_out"))
    p.set_defaults(func=cmd_synth)

    for name, func, help_ in (("select", cmd_select, "run one feature-selection method"),
                              ("bench", cmd_bench, "run the full benchmark grid")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--method", default=None)
        p.add_argument("--classifier", default=None)
        p.add_argument("--standardize", action="store_true", default=None)
        p.add_argument("--no-standardize", dest="standardize", action="store_false")
        p.set_defaults(func=func)

    p = sub.add_parser("report", help="summarize a finished bench run")
    p.add_argument("results", help="directory produced by bench")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - invariant violation boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
