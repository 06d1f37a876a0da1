import numpy as np
import pytest

from pqwf.eval import (
    ConfusionMatrix,
    SplitError,
    compare_to_reference,
    evaluate,
    split_dataset,
)

CODES = list(range(1, 12))
LABELS = np.repeat(CODES, 700)


def test_split_sizes_and_stratification():
    train, test = split_dataset(LABELS, 600, 100, seed=5)
    assert len(train) == 6600 and len(test) == 1100
    assert np.all(np.bincount(LABELS[train])[1:] == 600)
    assert np.all(np.bincount(LABELS[test])[1:] == 100)
    assert not set(train) & set(test)


def test_split_is_seeded():
    a = split_dataset(LABELS, 600, 100, seed=5)
    b = split_dataset(LABELS, 600, 100, seed=5)
    c = split_dataset(LABELS, 600, 100, seed=6)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], c[0])


def test_split_infeasible():
    with pytest.raises(SplitError):
        split_dataset(np.repeat(CODES, 650), 600, 100, seed=0)


def test_perfect_predictor():
    y = np.repeat(CODES, 3)
    cm = ConfusionMatrix.from_predictions(y, y)
    assert np.array_equal(cm.counts, 3 * np.eye(11, dtype=int))
    assert cm.overall_accuracy == 100.0


def test_constant_predictor():
    y = np.array([1] * 5 + [2] * 15 + [7] * 30)
    cm = ConfusionMatrix.from_predictions(y, np.ones_like(y))
    assert np.count_nonzero(cm.counts.sum(axis=0)) == 1
    assert cm.overall_accuracy == 10.0


def test_accuracy_identity_and_row_sums(rng):
    y = rng.integers(1, 12, 500)
    p = np.where(rng.random(500) < 0.8, y, rng.integers(1, 12, 500))
    cm = ConfusionMatrix.from_predictions(y, p)
    assert cm.overall_accuracy == 100.0 * np.trace(cm.counts) / cm.counts.sum()
    assert np.array_equal(cm.counts.sum(axis=1), np.bincount(y, minlength=12)[1:])
    pct = cm.row_percentages
    assert np.allclose(pct.sum(axis=1), 100.0)


def test_render_off_diagonal_row():
    counts = 100 * np.eye(11, dtype=int)
    counts[4, 4] = 60
    counts[4, 1] = 40
    text = ConfusionMatrix(counts).render("Confusion Matrix of KNN")
    lines = text.splitlines()
    assert lines[1].split("\t") == ["PQD"] + [f"C{c}" for c in CODES]
    assert lines[2 + 4].split("\t") == ["5", "0", "40", "0", "0", "60"] + ["0"] * 6
    assert lines[-1] == f"Overall Accuracy = {1060 / 11:.2f}%"


def test_evaluate_is_pure():
    class Fixed:
        def predict(self, X):
            return np.asarray(X, dtype=int)[:, 0]

    X = np.array([[1], [2], [2], [5]])
    y = np.array([1, 2, 3, 5])
    a, b = evaluate(Fixed(), X, y), evaluate(Fixed(), X, y)
    assert np.array_equal(a.counts, b.counts) and a.overall_accuracy == 75.0


def test_off_diagonal_mass():
    counts = np.zeros((11, 11), dtype=int)
    counts[4, 1] = 6  # C5 -> C2, inside a group
    counts[0, 3] = 4  # C1 -> C4, outside
    cm = ConfusionMatrix(counts)
    assert cm.off_diagonal_mass([(2, 5, 11), (1, 10)]) == 0.6


def test_compare_reference_values():
    c = compare_to_reference({"knn": 90.36, "svm": 97.72, "rf": 99.54})
    assert c.passed and all(abs(d) < 1e-12 for d in c.deltas.values())


def test_compare_floor_and_order_hold():
    assert compare_to_reference({"knn": 91, "svm": 95, "rf": 99}).passed


def test_compare_ordering_violation():
    c = compare_to_reference({"knn": 95, "svm": 94, "rf": 99})
    assert not c.passed
    failed = [label for label, ok, _ in c.checks if not ok]
    assert "ordering svm > knn" in failed


def test_compare_floor_violation():
    c = compare_to_reference({"knn": 88, "svm": 95, "rf": 96})
    assert not c.passed
    assert [label for label, ok, _ in c.checks if not ok] == ["rf floor"]


def test_compare_subset():
    assert compare_to_reference({"knn": 86.0}).passed
