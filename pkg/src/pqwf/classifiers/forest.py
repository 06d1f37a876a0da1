"""CART decision trees and a bootstrap random forest (majority vote)."""

from __future__ import annotations

import numpy as np

from .base import LabeledDataset


def gini(counts: np.ndarray) -> float:
    """Gini impurity ``1 - sum p_c^2`` of a class-count vector."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def tree_stream(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, tree_index])))


def _best_split(xs: np.ndarray, yk: np.ndarray, n_codes: int):
    """Lowest weighted-Gini midpoint split of one feature, or None if constant."""
    order = np.argsort(xs, kind="stable")
    xs = xs[order]
    n = len(xs)
    valid = np.flatnonzero(xs[:-1] < xs[1:])
    if len(valid) == 0:
        return None
    onehot = np.zeros((n, n_codes))
    onehot[np.arange(n), yk[order]] = 1.0
    cum = np.cumsum(onehot, axis=0)
    left = cum[valid]
    right = cum[-1] - left
    n_left = valid + 1.0
    n_right = n - n_left
    impurity = (
        n_left - (left * left).sum(1) / n_left + n_right - (right * right).sum(1) / n_right
    ) / n
    k = int(np.argmin(impurity))
    p = valid[k]
    threshold = 0.5 * (xs[p] + xs[p + 1])
    if not xs[p] <= threshold < xs[p + 1]:
        threshold = xs[p]
    return float(impurity[k]), float(threshold)


class DecisionTree:
    """Greedy CART classifier stored as flat node arrays.

    ``feature[i] == -1`` marks a leaf whose prediction is ``value[i]``;
    otherwise rows with ``x[feature] <= threshold`` go to ``left[i]``.
    """

    def __init__(self):
        self.feature: np.ndarray = np.array([], dtype=int)
        self.threshold: np.ndarray = np.array([])
        self.left: np.ndarray = np.array([], dtype=int)
        self.right: np.ndarray = np.array([], dtype=int)
        self.value: np.ndarray = np.array([], dtype=int)

    @property
    def node_count(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depth = np.zeros(self.node_count, dtype=int)
        for i in range(self.node_count):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max()) if self.node_count else 0

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        max_features: int,
        rng: np.random.Generator,
    ) -> "DecisionTree":
        """Grow until nodes are pure, hold < 2 rows, or cannot be split.

        At each node the features are visited in a fresh random order; the
        first ``max_features`` are scored, and further ones only while none
        of those admits a split.
        """
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        n_features = X.shape[1]
        if not 1 <= max_features <= n_features:
            raise ValueError(f"max_features must lie in 1..{n_features}")
        n_codes = int(y.max()) + 1
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node() -> int:
            for col in (feature, left, right, value):
                col.append(-1)
            threshold.append(0.0)
            return len(feature) - 1

        root = new_node()
        stack = [(root, np.arange(len(y)))]
        while stack:
            node, idx = stack.pop()
            counts = np.bincount(y[idx], minlength=n_codes)
            value[node] = int(np.argmax(counts))
            if len(idx) < 2 or np.count_nonzero(counts) == 1:
                continue
            best = None
            for rank, f in enumerate(rng.permutation(n_features)):
                if rank >= max_features and best is not None:
                    break
                found = _best_split(X[idx, f], y[idx], n_codes)
                if found is not None and (best is None or found[0] < best[0]):
                    best = (found[0], found[1], int(f))
            if best is None:
                continue
            _, thr, f = best
            go_left = X[idx, f] <= thr
            feature[node], threshold[node] = f, thr
            left[node] = new_node()
            right[node] = new_node()
            # right pushed first so the left subtree is numbered first
            stack.append((right[node], idx[~go_left]))
            stack.append((left[node], idx[go_left]))

        self.feature = np.array(feature, dtype=int)
        self.threshold = np.array(threshold, dtype=float)
        self.left = np.array(left, dtype=int)
        self.right = np.array(right, dtype=int)
        self.value = np.array(value, dtype=int)
        return self

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        node = np.zeros(len(X), dtype=int)
        rows = np.arange(len(X))
        active = self.feature[node] >= 0
        while active.any():
            r = rows[active]
            nd = node[r]
            go_left = X[r, self.feature[nd]] <= self.threshold[nd]
            node[r] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] >= 0
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self, node: int = 0) -> dict:
        if self.feature[node] < 0:
            return {"leaf": int(self.value[node])}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "left": self.to_dict(int(self.left[node])),
            "right": self.to_dict(int(self.right[node])),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        feature, threshold, left, right, value = [], [], [], [], []

        def walk(sub: dict) -> int:
            i = len(feature)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(-1)
            if "leaf" in sub:
                value[i] = sub["leaf"]
                return i
            feature[i] = sub["feature"]
            threshold[i] = sub["threshold"]
            left[i] = walk(sub["left"])
            right[i] = walk(sub["right"])
            return i

        walk(d)
        tree = cls()
        tree.feature = np.array(feature, dtype=int)
        tree.threshold = np.array(threshold, dtype=float)
        tree.left = np.array(left, dtype=int)
        tree.right = np.array(right, dtype=int)
        tree.value = np.array(value, dtype=int)
        return tree


def tree_train(train: LabeledDataset, max_features: int, rng: np.random.Generator) -> DecisionTree:
    return DecisionTree().fit(train.X, train.y, max_features, rng)


class RandomForestClassifier:
    """Bagged CART trees with per-node random feature subsets.

    Tree ``t`` draws its bootstrap sample and its feature orders from a
    stream keyed by ``(seed, t)``, so the forest does not depend on training
    order.  Raw (unstandardized) features are used.
    """

    kind = "rf"

    def __init__(self, n_trees: int = 100, max_features: int = 2, seed: int = 0, bootstrap: bool = True):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_features = max_features
        self.seed = seed
        self.bootstrap = bootstrap
        self.trees: list[DecisionTree] = []
        self.oob_indices: list[np.ndarray] = []
        self.n_train_: int = 0

    def fit(self, train: LabeledDataset) -> "RandomForestClassifier":
        n = len(train)
        if not 1 <= self.max_features <= train.X.shape[1]:
            raise ValueError(f"max_features must lie in 1..{train.X.shape[1]}")
        self.trees, self.oob_indices = [], []
        self.n_train_ = n
        for t in range(self.n_trees):
            rng = tree_stream(self.seed, t)
            if self.bootstrap:
                draw = rng.integers(0, n, size=n)
                in_bag = np.zeros(n, dtype=bool)
                in_bag[draw] = True
                oob = np.flatnonzero(~in_bag)
            else:
                draw = np.arange(n)
                oob = np.array([], dtype=int)
            tree = DecisionTree().fit(train.X[draw], train.y[draw], self.max_features, rng)
            self.trees.append(tree)
            self.oob_indices.append(oob)
        return self

    def tree_votes(self, X: np.ndarray) -> np.ndarray:
        """(n_trees, n_queries) per-tree predicted codes."""
        if not self.trees:
            raise RuntimeError("model is not fitted")
        return np.vstack([tree.predict(X) for tree in self.trees])

    def vote_histogram(self, X: np.ndarray) -> np.ndarray:
        votes = self.tree_votes(X)
        n_codes = int(votes.max()) + 1
        hist = np.zeros((votes.shape[1], n_codes), dtype=int)
        for row in votes:
            hist[np.arange(votes.shape[1]), row] += 1
        return hist

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.vote_histogram(X), axis=1)

    def oob_error(self, train: LabeledDataset) -> tuple[float, int]:
        """Out-of-bag misclassification rate and the number of rows never out of bag.

        Each training row is voted on only by trees that did not see it.
        """
        n = len(train)
        if n != self.n_train_:
            raise ValueError("OOB evaluation needs the training set the forest was fit on")
        n_codes = int(train.y.max()) + 1
        for tree in self.trees:
            n_codes = max(n_codes, int(tree.value.max()) + 1)
        hist = np.zeros((n, n_codes), dtype=int)
        for tree, oob in zip(self.trees, self.oob_indices):
            if len(oob):
                hist[oob, tree.predict(train.X[oob])] += 1
        voted = hist.sum(axis=1) > 0
        skipped = int(n - voted.sum())
        if not voted.any():
            return float("nan"), skipped
        pred = np.argmax(hist[voted], axis=1)
        return float(np.mean(pred != train.y[voted])), skipped

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_trees": self.n_trees,
            "max_features": self.max_features,
            "seed": self.seed,
            "bootstrap": self.bootstrap,
            "n_train": self.n_train_,
            "trees": [tree.to_dict() for tree in self.trees],
            "oob_indices": [oob.tolist() for oob in self.oob_indices],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RandomForestClassifier":
        model = cls(d["n_trees"], d["max_features"], d["seed"], d["bootstrap"])
        model.n_train_ = d["n_train"]
        model.trees = [DecisionTree.from_dict(t) for t in d["trees"]]
        model.oob_indices = [np.array(o, dtype=int) for o in d["oob_indices"]]
        return model
