"""Stratified splitting, confusion matrices and comparison with the reference accuracies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signal_gen import ALL_CLASSES

CLASSIFIER_ORDER = ("knn", "svm", "rf")

# Published overall test accuracies (%) the run is compared against.
REFERENCE_ACCURACY = {"knn": 90.36, "svm": 97.72, "rf": 99.54}
ACCURACY_FLOOR = {"knn": 85.0, "svm": 94.0, "rf": 97.0}


class SplitError(ValueError):
    """Raised when a class has too few rows for the requested split."""


def split_dataset(
    labels: np.ndarray, train_per_class: int, test_per_class: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Row indices of a stratified random train/test split.

    Each class's rows are shuffled with a stream keyed by ``(seed, class)``;
    the first ``train_per_class`` go to train and the next ``test_per_class``
    to test.  Output is grouped by ascending class code.
    """
    labels = np.asarray(labels, dtype=int)
    train, test = [], []
    for code in np.unique(labels):
        rows = np.flatnonzero(labels == code)
        need = train_per_class + test_per_class
        if len(rows) < need:
            raise SplitError(f"class {code} has {len(rows)} rows, split needs {need}")
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, int(code)])))
        rows = rows[rng.permutation(len(rows))]
        train.append(rows[:train_per_class])
        test.append(rows[train_per_class:need])
    return np.concatenate(train), np.concatenate(test)


@dataclass
class ConfusionMatrix:
    """Counts with rows = true class and columns = predicted class."""

    counts: np.ndarray
    classes: tuple[int, ...] = tuple(c.code for c in ALL_CLASSES)

    @classmethod
    def from_predictions(cls, y_true, y_pred, classes=None) -> "ConfusionMatrix":
        y_true = np.asarray(y_true, dtype=int)
        y_pred = np.asarray(y_pred, dtype=int)
        if classes is None:
            classes = tuple(c.code for c in ALL_CLASSES)
        pos = {c: i for i, c in enumerate(classes)}
        counts = np.zeros((len(classes), len(classes)), dtype=int)
        for t, p in zip(y_true, y_pred):
            counts[pos[int(t)], pos[int(p)]] += 1
        return cls(counts=counts, classes=tuple(int(c) for c in classes))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def overall_accuracy(self) -> float:
        """Percentage of correct predictions."""
        return float(100.0 * np.trace(self.counts) / self.total) if self.total else 0.0

    @property
    def row_percentages(self) -> np.ndarray:
        sums = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            pct = np.where(sums > 0, 100.0 * self.counts / np.maximum(sums, 1), 0.0)
        return pct

    @property
    def per_class_accuracy(self) -> dict[int, float]:
        pct = self.row_percentages
        return {c: float(pct[i, i]) for i, c in enumerate(self.classes)}

    def off_diagonal_mass(self, groups) -> float:
        """Fraction of misclassified rows whose true and predicted class share a group."""
        pos = {c: i for i, c in enumerate(self.classes)}
        off = self.counts.copy()
        np.fill_diagonal(off, 0)
        total = off.sum()
        if total == 0:
            return 1.0
        inside = 0
        for group in groups:
            idx = [pos[c] for c in group]
            inside += off[np.ix_(idx, idx)].sum()
        return float(inside / total)

    def render(self, title: str) -> str:
        """Text table with integer row percentages."""
        pct = np.rint(self.row_percentages).astype(int)
        head = ["PQD"] + [f"C{c}" for c in self.classes]
        lines = [title, "\t".join(head)]
        for i, c in enumerate(self.classes):
            lines.append("\t".join([str(c)] + [str(v) for v in pct[i]]))
        lines.append(f"Overall Accuracy = {self.overall_accuracy:.2f}%")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "counts": self.counts.tolist(),
            "percentages": np.round(self.row_percentages, 2).tolist(),
            "overall_accuracy": round(self.overall_accuracy, 4),
            "per_class_accuracy": {str(c): round(v, 2) for c, v in self.per_class_accuracy.items()},
        }


def evaluate(model, X_test: np.ndarray, y_test: np.ndarray, classes=None) -> ConfusionMatrix:
    return ConfusionMatrix.from_predictions(y_test, model.predict(X_test), classes)


@dataclass
class Comparison:
    passed: bool
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    deltas: dict[str, float] = field(default_factory=dict)

    def render(self) -> str:
        lines = ["classifier  ours      reference delta"]
        for name, delta in self.deltas.items():
            ours = REFERENCE_ACCURACY[name] + delta
            lines.append(f"{name:<10}  {ours:7.2f}%  {REFERENCE_ACCURACY[name]:7.2f}%  {delta:+7.2f}")
        for label, ok, detail in self.checks:
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        lines.append("RESULT: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"check": c, "passed": ok, "detail": d} for c, ok, d in self.checks],
            "deltas_vs_reference": {k: round(v, 4) for k, v in self.deltas.items()},
        }


def compare_to_reference(accuracies: dict[str, float]) -> Comparison:
    """Check accuracy floors and the ordering rf > svm > knn.

    Only classifiers present in ``accuracies`` are checked; the ordering is
    checked between each adjacent present pair.
    """
    present = [name for name in CLASSIFIER_ORDER if name in accuracies]
    checks = []
    for name in present:
        acc = accuracies[name]
        floor = ACCURACY_FLOOR[name]
        checks.append((f"{name} floor", bool(acc >= floor), f"{acc:.2f}% >= {floor:.2f}%"))
    for low, high in zip(present, present[1:]):
        ok = bool(accuracies[high] > accuracies[low])
        checks.append(
            (f"ordering {high} > {low}", ok, f"{accuracies[high]:.2f}% vs {accuracies[low]:.2f}%")
        )
    deltas = {name: accuracies[name] - REFERENCE_ACCURACY[name] for name in present}
    return Comparison(passed=all(ok for _, ok, _ in checks) and bool(present), checks=checks, deltas=deltas)
