"""The generate -> extract -> train/evaluate stages behind the CLI."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classifiers import KnnClassifier, LabeledDataset, RandomForestClassifier, SvmClassifier
from .config import ExperimentConfig
from .dwt import wavedec
from .eval import (
    ACCURACY_FLOOR,
    CLASSIFIER_ORDER,
    Comparison,
    ConfusionMatrix,
    compare_to_reference,
    split_dataset,
)
from .features import DegenerateInputError, extract_features
from .io import (
    read_dataset_csv,
    read_features_csv,
    write_dataset_csv,
    write_features_csv,
    write_json,
)
from .signal_gen import ALL_CLASSES, generate_dataset

log = logging.getLogger(__name__)

DATASET_FILE = "dataset.csv"
FEATURES_FILE = "features.csv"
REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"

TITLES = {
    "knn": "Confusion Matrix of KNN",
    "svm": "Confusion Matrix of SVM",
    "rf": "Confusion Matrix of Random Forest",
}


def generate(cfg: ExperimentConfig, out_dir: Path) -> tuple[Path, int]:
    out_dir.mkdir(parents=True, exist_ok=True)
    records = generate_dataset(cfg.dataset_spec)
    path = out_dir / DATASET_FILE
    write_dataset_csv(records, path)
    return path, len(records)


@dataclass
class ExtractSummary:
    path: Path
    rows: int
    skipped: list[int] = field(default_factory=list)


def extract(dataset_path: Path, cfg: ExperimentConfig, out_dir: Path) -> ExtractSummary:
    records = read_dataset_csv(dataset_path)
    rows, skipped = [], []
    for rec in records:
        decomp = wavedec(rec.samples, cfg.levels, mode=cfg.boundary)
        try:
            rows.append((rec.id, extract_features(decomp, rec.label)))
        except DegenerateInputError as exc:
            log.warning("signal %d skipped: %s", rec.id, exc)
            skipped.append(rec.id)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / FEATURES_FILE
    write_features_csv(rows, path)
    return ExtractSummary(path=path, rows=len(rows), skipped=skipped)


def _fit_svm(params: dict, C: float, gamma: float, data: LabeledDataset) -> SvmClassifier:
    return SvmClassifier(C=C, gamma=gamma, tol=params["tol"], max_iter=params["max_iter"]).fit(data)


def tune_svm(params: dict, train: LabeledDataset) -> dict:
    """Choose (C, gamma) on a per-class validation split carved from ``train``.

    The defaults are kept unless ``tune == "always"`` or (``"auto"``) they
    miss the SVM accuracy floor on the validation rows.  Grid ties go to the
    first combination in (C, gamma) order.
    """
    choice = {"C": params["C"], "gamma": params["gamma"], "tuned": False, "validation": []}
    if params["tune"] == "never":
        return choice
    n_val = int(params["validation_per_class"])
    fit_rows, val_rows = [], []
    for code in np.unique(train.y):
        rows = np.flatnonzero(train.y == code)
        if len(rows) <= n_val:
            raise ValueError(f"class {code} too small for a {n_val}-row validation split")
        fit_rows.append(rows[:-n_val])
        val_rows.append(rows[-n_val:])
    fit_set = train.subset(np.concatenate(fit_rows))
    val_set = train.subset(np.concatenate(val_rows))

    seen: dict[tuple[float, float], float] = {}

    def score(C, gamma):
        if (C, gamma) in seen:
            return seen[C, gamma]
        model = _fit_svm(params, C, gamma, fit_set)
        acc = 100.0 * float(np.mean(model.predict(val_set.X) == val_set.y))
        choice["validation"].append({"C": C, "gamma": gamma, "accuracy": round(acc, 4)})
        seen[C, gamma] = acc
        return acc

    if params["tune"] == "auto":
        default_acc = score(params["C"], params["gamma"])
        if default_acc >= ACCURACY_FLOOR["svm"]:
            return choice
    best = None
    for C in params["grid_C"]:
        for gamma in params["grid_gamma"]:
            acc = score(C, gamma)
            if best is None or acc > best[0]:
                best = (acc, C, gamma)
    choice.update(C=best[1], gamma=best[2], tuned=True)
    return choice


def _svm_diagnostics(model: SvmClassifier) -> dict:
    sums = [abs(float(np.sum(m.dual_coef))) for m in model.machines]
    alphas = np.concatenate([np.abs(m.dual_coef) for m in model.machines])
    return {
        "machines": len(model.machines),
        "max_abs_sum_alpha_y": max(sums),
        "max_alpha": float(alphas.max()) if len(alphas) else 0.0,
        "min_alpha": float(alphas.min()) if len(alphas) else 0.0,
        "max_kkt_gap": max(m.kkt_gap for m in model.machines),
        "support_vectors": int(sum(len(m.dual_coef) for m in model.machines)),
    }


@dataclass
class TrainEvalResult:
    report: dict
    comparison: Comparison
    matrices: dict[str, ConfusionMatrix]
    models: dict
    runtime_s: dict[str, float]


def train_eval(
    features_path: Path,
    cfg: ExperimentConfig,
    out_dir: Path,
    classifiers: list[str] | None = None,
) -> TrainEvalResult:
    table = read_features_csv(features_path)
    split = cfg.split
    train_idx, test_idx = split_dataset(
        table.labels, split["train_per_class"], split["test_per_class"], split["seed"]
    )
    train = LabeledDataset(table.X[train_idx], table.labels[train_idx], table.ids[train_idx])
    test = LabeledDataset(table.X[test_idx], table.labels[test_idx], table.ids[test_idx])
    classes = tuple(c.code for c in ALL_CLASSES)
    ccfg = cfg.classifiers
    enabled = [c for c in CLASSIFIER_ORDER if c in (classifiers or ccfg["enabled"])]

    models, matrices, entries, runtime = {}, {}, {}, {}
    for name in enabled:
        t0 = time.perf_counter()
        entry: dict = {}
        if name == "knn":
            model = KnnClassifier(k=int(ccfg["knn"]["k"])).fit(train)
            entry["hyperparameters"] = {"k": model.k}
        elif name == "svm":
            params = ccfg["svm"]
            choice = tune_svm(params, train)
            model = _fit_svm(params, choice["C"], choice["gamma"], train)
            entry["hyperparameters"] = {
                "C": model.C, "gamma": model.gamma, "tol": model.tol, "max_iter": model.max_iter,
            }
            entry["tuning"] = choice
            entry["dual"] = _svm_diagnostics(model)
        else:
            p = ccfg["rf"]
            model = RandomForestClassifier(
                n_trees=int(p["n_trees"]), max_features=int(p["max_features"]), seed=int(p["seed"])
            ).fit(train)
            entry["hyperparameters"] = {
                "n_trees": model.n_trees, "max_features": model.max_features, "seed": model.seed,
            }
        cm = ConfusionMatrix.from_predictions(test.y, model.predict(test.X), classes)
        if name == "rf":
            oob, skipped = model.oob_error(train)
            entry["oob_error"] = round(oob, 6)
            entry["oob_rows_skipped"] = skipped
            entry["test_error"] = round(1.0 - cm.overall_accuracy / 100.0, 6)
        entry["confusion"] = cm.to_dict()
        runtime[name] = time.perf_counter() - t0
        models[name], matrices[name], entries[name] = model, cm, entry

    comparison = compare_to_reference({n: m.overall_accuracy for n, m in matrices.items()})
    report = {
        "dataset_seed": cfg.raw["dataset"]["master_seed"],
        "split": dict(split),
        "train_rows": len(train),
        "test_rows": len(test),
        "classifiers": entries,
        "comparison": comparison.to_dict(),
    }

    out_dir.mkdir(parents=True, exist_ok=True)
    model_dir = out_dir / "models"
    model_dir.mkdir(exist_ok=True)
    for name, model in models.items():
        payload = model.to_dict()
        payload["trained_on"] = {"features": features_path.name, "split": dict(split)}
        write_json(payload, model_dir / f"{name}.json")
    write_json(report, out_dir / REPORT_JSON)
    (out_dir / REPORT_TEXT).write_text(render_text_report(matrices, comparison, runtime))
    return TrainEvalResult(report, comparison, matrices, models, runtime)


def render_text_report(matrices: dict, comparison: Comparison, runtime: dict) -> str:
    parts = []
    for name in matrices:
        parts.append(matrices[name].render(TITLES[name]))
    parts.append(comparison.render())
    parts.append("runtime: " + ", ".join(f"{k} {v:.1f}s" for k, v in runtime.items()))
    return "\n\n".join(parts) + "\n"
