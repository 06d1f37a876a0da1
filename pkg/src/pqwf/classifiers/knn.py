"""k-nearest-neighbour classifier with Euclidean distance."""

from __future__ import annotations

import numpy as np

from .base import LabeledDataset, Standardizer, vote

_CHUNK = 256


class KnnClassifier:
    """Stores the (standardized) training rows and votes among the k closest.

    Distance ties go to the lower training row index, vote ties to the
    smallest class code.
    """

    kind = "knn"

    def __init__(self, k: int = 1, standardize: bool = True):
        if k < 1 or k % 2 == 0:
            raise ValueError(f"k must be a positive odd integer, got {k}")
        self.k = k
        self.standardize = standardize
        self.scaler: Standardizer | None = None
        self.X_: np.ndarray | None = None
        self.y_: np.ndarray | None = None

    def fit(self, train: LabeledDataset) -> "KnnClassifier":
        self.scaler = Standardizer.fit(train.X) if self.standardize else None
        self.X_ = self._scale(train.X)
        self.y_ = train.y.copy()
        return self

    def _scale(self, X):
        X = np.asarray(X, dtype=float)
        return self.scaler.transform(X) if self.scaler is not None else X

    def neighbours(self, X: np.ndarray) -> np.ndarray:
        """Training row indices of the k nearest neighbours of each query."""
        if self.X_ is None:
            raise RuntimeError("model is not fitted")
        Q = np.atleast_2d(self._scale(X))
        k = min(self.k, len(self.X_))
        out = np.empty((len(Q), k), dtype=int)
        for lo in range(0, len(Q), _CHUNK):
            block = Q[lo : lo + _CHUNK]
            dist = np.sqrt(((block[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2))
            out[lo : lo + _CHUNK] = np.argsort(dist, axis=1, kind="stable")[:, :k]
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        nn = self.neighbours(X)
        n_codes = int(self.y_.max()) + 1
        return np.array([vote(self.y_[row], n_codes) for row in nn], dtype=int)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "standardization": None if self.scaler is None else self.scaler.to_dict(),
            "rows": self.X_.tolist(),
            "labels": self.y_.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KnnClassifier":
        model = cls(k=d["k"], standardize=d["standardization"] is not None)
        if d["standardization"] is not None:
            model.scaler = Standardizer.from_dict(d["standardization"])
        model.X_ = np.array(d["rows"], dtype=float)
        model.y_ = np.array(d["labels"], dtype=int)
        return model
