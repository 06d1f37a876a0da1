"""Soft-margin RBF support vector machine, one-vs-one, trained with SMO.

Each binary machine solves the dual

    min_a  1/2 a' Q a - sum(a)    s.t.  0 <= a_i <= C,  sum(y_i a_i) = 0

with ``Q_ij = y_i y_j K(s_i, s_j)`` by sequential minimal optimization using
second-order working-set selection.  The bias averages ``y_t - f(s_t)`` over
the free (margin) support vectors.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .base import LabeledDataset, Standardizer

log = logging.getLogger(__name__)

_TAU = 1e-12


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """``exp(-gamma * ||a - b||^2)`` for every row pair."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass
class SmoResult:
    alpha: np.ndarray
    bias: float
    iterations: int
    kkt_gap: float
    converged: bool


def smo_solve(
    K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3, max_iter: int = 100_000
) -> SmoResult:
    """Solve one binary dual problem on a precomputed kernel matrix.

    ``y`` holds +1/-1 labels.  Stops when the maximal KKT violation
    ``max_{I_up} -y G - min_{I_low} -y G`` drops to ``tol``.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    alpha = np.zeros(n)
    grad = -np.ones(n)
    diag = np.diag(K).copy()
    pos = y > 0
    gap = np.inf
    it = 0
    while it < max_iter:
        yg = -y * grad
        below = alpha < C
        above = alpha > 0
        up = (below & pos) | (above & ~pos)
        low = (below & ~pos) | (above & pos)
        yg_up = np.where(up, yg, -np.inf)
        i = int(np.argmax(yg_up))
        m = yg_up[i]
        big_m = np.min(np.where(low, yg, np.inf))
        gap = m - big_m
        if gap <= tol:
            break

        b = m - yg
        cand = low & (b > 0)
        a = diag[i] + diag - 2.0 * K[i]
        a = np.where(a > 0, a, _TAU)
        score = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(score))

        step = b[j] / a[j]
        step = min(step, C - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else C - alpha[j])

        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        for t in (i, j):
            if alpha[t] < _TAU * C:
                alpha[t] = 0.0
            elif alpha[t] > C * (1.0 - _TAU):
                alpha[t] = C
        grad += step * y * (K[:, i] - K[:, j])
        it += 1

    yg = -y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        bias = float(yg[free].mean())
    else:
        below = alpha < C
        above = alpha > 0
        up = (below & pos) | (above & ~pos)
        low = (below & ~pos) | (above & pos)
        hi = yg[up].max() if up.any() else 0.0
        lo = yg[low].min() if low.any() else 0.0
        bias = float((hi + lo) / 2.0)
    return SmoResult(alpha=alpha, bias=bias, iterations=it, kkt_gap=float(gap), converged=gap <= tol)


@dataclass
class BinaryMachine:
    positive: int  # class code voted for when the decision value is > 0
    negative: int
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float
    iterations: int = 0
    kkt_gap: float = 0.0

    def decision(self, X: np.ndarray, gamma: float) -> np.ndarray:
        if len(self.dual_coef) == 0:
            return np.full(len(X), self.bias)
        return rbf_kernel(X, self.support_vectors, gamma) @ self.dual_coef + self.bias

    def to_dict(self) -> dict:
        return {
            "classes": [self.positive, self.negative],
            "support_vectors": self.support_vectors.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias,
            "iterations": self.iterations,
            "kkt_gap": self.kkt_gap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BinaryMachine":
        sv = np.array(d["support_vectors"], dtype=float).reshape(len(d["dual_coef"]), -1)
        return cls(
            positive=d["classes"][0],
            negative=d["classes"][1],
            support_vectors=sv,
            dual_coef=np.array(d["dual_coef"], dtype=float),
            bias=d["bias"],
            iterations=d.get("iterations", 0),
            kkt_gap=d.get("kkt_gap", 0.0),
        )


def train_binary(
    X: np.ndarray,
    y: np.ndarray,
    positive: int,
    negative: int,
    C: float,
    gamma: float,
    tol: float = 1e-3,
    max_iter: int = 100_000,
    K: np.ndarray | None = None,
) -> tuple[BinaryMachine, SmoResult]:
    """Train ``positive`` (+1) against ``negative`` (-1) on rows of those two classes."""
    signs = np.where(y == positive, 1.0, -1.0)
    if K is None:
        K = rbf_kernel(X, X, gamma)
    res = smo_solve(K, signs, C, tol, max_iter)
    if not res.converged:
        log.warning(
            "SMO for classes %d/%d stopped at %d iterations with KKT gap %.3g",
            positive, negative, res.iterations, res.kkt_gap,
        )
    sv = res.alpha > 0
    machine = BinaryMachine(
        positive=positive,
        negative=negative,
        support_vectors=X[sv].copy(),
        dual_coef=(res.alpha * signs)[sv],
        bias=res.bias,
        iterations=res.iterations,
        kkt_gap=res.kkt_gap,
    )
    return machine, res


class SvmClassifier:
    """One-vs-one RBF SVM over standardized features."""

    kind = "svm"

    def __init__(
        self,
        C: float = 10.0,
        gamma: float = 0.2,
        tol: float = 1e-3,
        max_iter: int = 100_000,
        standardize: bool = True,
    ):
        if C <= 0 or gamma <= 0:
            raise ValueError("C and gamma must be positive")
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter
        self.standardize = standardize
        self.scaler: Standardizer | None = None
        self.classes_: list[int] = []
        self.machines: list[BinaryMachine] = []
        self.alphas_: list[np.ndarray] = []  # full dual vectors, kept for diagnostics

    def _scale(self, X):
        X = np.asarray(X, dtype=float)
        return self.scaler.transform(X) if self.scaler is not None else X

    def fit(self, train: LabeledDataset) -> "SvmClassifier":
        self.scaler = Standardizer.fit(train.X) if self.standardize else None
        X = self._scale(train.X)
        y = train.y
        self.classes_ = sorted(int(c) for c in np.unique(y))
        if len(self.classes_) < 2:
            raise ValueError("SVM training needs at least two classes")
        self.machines, self.alphas_ = [], []
        for a, b in itertools.combinations(self.classes_, 2):
            rows = (y == a) | (y == b)
            machine, res = train_binary(
                X[rows], y[rows], a, b, self.C, self.gamma, self.tol, self.max_iter
            )
            self.machines.append(machine)
            self.alphas_.append(res.alpha)
        return self

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        """(n_queries, n_machines) decision values, machine order as ``self.machines``."""
        Q = np.atleast_2d(self._scale(X))
        return np.column_stack([m.decision(Q, self.gamma) for m in self.machines])

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self.machines:
            raise RuntimeError("model is not fitted")
        dec = self.decision_values(X)
        index = {c: k for k, c in enumerate(self.classes_)}
        n_cls = len(self.classes_)
        votes = np.zeros((len(dec), n_cls))
        margin = np.zeros((len(dec), n_cls))
        for col, m in enumerate(self.machines):
            f = dec[:, col]
            win_pos = f > 0
            votes[win_pos, index[m.positive]] += 1
            votes[~win_pos, index[m.negative]] += 1
            margin[:, index[m.positive]] += f
            margin[:, index[m.negative]] -= f
        out = np.empty(len(dec), dtype=int)
        for r in range(len(dec)):
            top = np.flatnonzero(votes[r] == votes[r].max())
            if len(top) > 1:
                best = margin[r, top].max()
                top = top[margin[r, top] == best]
            out[r] = self.classes_[int(top[0])]
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "C": self.C,
            "gamma": self.gamma,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "standardization": None if self.scaler is None else self.scaler.to_dict(),
            "classes": self.classes_,
            "machines": [m.to_dict() for m in self.machines],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvmClassifier":
        model = cls(
            C=d["C"], gamma=d["gamma"], tol=d["tol"], max_iter=d["max_iter"],
            standardize=d["standardization"] is not None,
        )
        if d["standardization"] is not None:
            model.scaler = Standardizer.from_dict(d["standardization"])
        model.classes_ = list(d["classes"])
        model.machines = [BinaryMachine.from_dict(m) for m in d["machines"]]
        return model
