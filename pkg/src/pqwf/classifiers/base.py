"""Shared data containers and feature scaling for the classifiers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LabeledDataset:
    """Feature matrix with integer class codes (and optional row ids)."""

    X: np.ndarray
    y: np.ndarray
    ids: np.ndarray | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2 or len(self.X) == 0:
            raise ValueError("dataset needs a nonempty 2-D feature matrix")
        if len(self.y) != len(self.X):
            raise ValueError("feature and label counts differ")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("dataset contains non-finite features")
        if self.ids is not None:
            self.ids = np.asarray(self.ids, dtype=int)

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, index) -> "LabeledDataset":
        index = np.asarray(index, dtype=int)
        ids = None if self.ids is None else self.ids[index]
        return LabeledDataset(self.X[index], self.y[index], ids)


@dataclass
class Standardizer:
    """Per-feature z-score parameters fit on training rows."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=float)
        if len(X) == 0:
            raise ValueError("cannot standardize an empty set")
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        return cls(mean=mean, scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Standardizer":
        return cls(mean=np.array(d["mean"], dtype=float), scale=np.array(d["scale"], dtype=float))


def standardize_fit(train: LabeledDataset) -> Standardizer:
    return Standardizer.fit(train.X)


def vote(labels: np.ndarray, n_codes: int) -> int:
    """Majority label; ties go to the smallest class code."""
    return int(np.argmax(np.bincount(labels, minlength=n_codes)))
