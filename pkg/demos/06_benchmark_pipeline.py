"""Drive the full benchmark pipeline end to end through the CLI.

Four commands: `synth` writes a dataset, `select` runs one selector,
`bench` runs the whole (method x classifier) grid, and `report` distills a
result directory into a summary plus a 2-D embedding for plotting.  The same
entry points back the installed `adfsa` console script.
"""

import json
import tempfile
from pathlib import Path

from adfsa.cli import main


def run(argv):
    print(f"$ adfsa {' '.join(argv)}")
    rc = main(argv)
    assert rc == 0, f"exit code {rc}"


def show(path, n=6):
    lines = Path(path).read_text().splitlines()
    print(f"--- {Path(path).name} ({len(lines)} lines) ---")
    for line in lines[:n]:
        print(f"  {line[:100]}")
    print()


def main_demo():
    root = Path(tempfile.mkdtemp(prefix="adfsa_demo_"))
    data = root / "data"

    run(["synth", "--samples", "120", "--features", "16",
         "--informative", "3", "--redundant", "3", "--classes", "3",
         "--seed", "2", "--out", str(data)])
    truth = json.loads((data / "ground_truth.json").read_text())
    print(f"planted columns: {truth['informative_indices']}\n")

    config = {
        "data": {"features_csv": str(data / "features.csv"),
                 "label_column": "label"},
        "seed": 2,
        "standardize": True,
        "methods": ["none", "pca", "rfe", "adfsa"],
        "classifiers": ["knn", "logreg", "linear_svm"],
        "split": {"test_fraction": 0.2, "k_folds": 5},
        "pca": {"k": 4},
        "rfe": {"k": 4},
        "adfsa": {"population_size": 12, "n_generations": 8,
                  "evaluator": "knn"},
        "out": str(root / "results"),
    }
    cfg_path = root / "config.json"
    cfg_path.write_text(json.dumps(config, indent=2))

    run(["select", "--config", str(cfg_path), "--method", "adfsa",
         "--out", str(root / "sel")])
    sel = json.loads((root / "sel" / "subset_adfsa.json").read_text())
    print(f"selected columns: {sel['selected_indices']}\n")

    run(["bench", "--config", str(cfg_path)])
    show(root / "results" / "report.csv")
    show(root / "results" / "percent_change.csv", n=4)

    run(["report", str(root / "results"), "--out", str(root / "rep")])
    show(root / "rep" / "summary.md", n=10)
    print(f"all artifacts under {root}")


if __name__ == "__main__":
    main_demo()
