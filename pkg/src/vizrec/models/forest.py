"""Random forest of CART-style decision trees.

Trees grow to purity (no depth cap) on bootstrap samples, choosing the
best Gini-impurity split among sqrt(d) candidate features per node.
Feature importances use mean decrease impurity. The split search runs in a
compiled kernel; per-node feature subsampling uses an explicit xorshift
generator so results are bit-reproducible for a fixed seed independent of
library internals.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .._rng import spawn_seed, substream
from ..errors import ValidationError
from .base import ChoiceClassifier


@njit(cache=True, inline="always")
def _xorshift32(state: np.uint64) -> np.uint64:
    state ^= (state << np.uint64(13)) & np.uint64(0xFFFFFFFF)
    state ^= state >> np.uint64(17)
    state ^= (state << np.uint64(5)) & np.uint64(0xFFFFFFFF)
    return state & np.uint64(0xFFFFFFFF)


@njit(cache=True)
def _grow_tree(X, y, n_classes, max_features, seed):
    """Grow one tree; returns (feature, threshold, left, right, value, importances).

    feature[i] == -1 marks a leaf; value rows hold class probabilities.
    """
    n_total, n_features = X.shape
    max_nodes = 2 * n_total + 1
    feature = np.full(max_nodes, -1, dtype=np.int64)
    threshold = np.zeros(max_nodes, dtype=np.float64)
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    value = np.zeros((max_nodes, n_classes), dtype=np.float64)
    importances = np.zeros(n_features, dtype=np.float64)

    samples = np.arange(n_total, dtype=np.int64)
    stack_node = np.empty(max_nodes, dtype=np.int64)
    stack_start = np.empty(max_nodes, dtype=np.int64)
    stack_end = np.empty(max_nodes, dtype=np.int64)
    stack_size = 1
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n_total
    n_nodes = 1

    feat_order = np.arange(n_features, dtype=np.int64)
    vals = np.empty(n_total, dtype=np.float64)
    labels = np.empty(n_total, dtype=np.int64)
    counts = np.empty(n_classes, dtype=np.float64)
    left_counts = np.empty(n_classes, dtype=np.float64)
    state = np.uint64(seed if seed > 0 else 0x9E3779B9)

    while stack_size > 0:
        stack_size -= 1
        node = stack_node[stack_size]
        start = stack_start[stack_size]
        end = stack_end[stack_size]
        n_node = end - start

        counts[:] = 0.0
        for i in range(start, end):
            counts[y[samples[i]]] += 1.0
        for k in range(n_classes):
            value[node, k] = counts[k] / n_node

        sq = 0.0
        for k in range(n_classes):
            sq += (counts[k] / n_node) ** 2
        impurity = 1.0 - sq
        if n_node < 2 or impurity <= 0.0:
            continue

        # Partial Fisher-Yates draw of max_features distinct candidates.
        best_gain = 0.0
        best_feature = -1
        best_threshold = 0.0
        for pick in range(max_features):
            state = _xorshift32(state)
            j = pick + int(state % np.uint64(n_features - pick))
            tmp = feat_order[pick]
            feat_order[pick] = feat_order[j]
            feat_order[j] = tmp
            f = feat_order[pick]

            for i in range(n_node):
                vals[i] = X[samples[start + i], f]
            order = np.argsort(vals[:n_node], kind="mergesort")
            for i in range(n_node):
                labels[i] = y[samples[start + order[i]]]

            left_counts[:] = 0.0
            n_left = 0.0
            for i in range(n_node - 1):
                left_counts[labels[i]] += 1.0
                n_left += 1.0
                v_here = vals[order[i]]
                v_next = vals[order[i + 1]]
                if v_here == v_next:
                    continue
                n_right = n_node - n_left
                sq_l = 0.0
                sq_r = 0.0
                for k in range(n_classes):
                    sq_l += (left_counts[k] / n_left) ** 2
                    sq_r += ((counts[k] - left_counts[k]) / n_right) ** 2
                child_impurity = (n_left * (1.0 - sq_l) + n_right * (1.0 - sq_r)) / n_node
                gain = impurity - child_impurity
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best_feature = f
                    thr = 0.5 * (v_here + v_next)
                    if thr >= v_next:
                        thr = v_here
                    best_threshold = thr

        if best_feature < 0:
            continue

        # Two-pointer partition of samples[start:end] on x <= threshold.
        lo = start
        hi = end - 1
        while lo <= hi:
            if X[samples[lo], best_feature] <= best_threshold:
                lo += 1
            else:
                tmp = samples[lo]
                samples[lo] = samples[hi]
                samples[hi] = tmp
                hi -= 1
        mid = lo
        if mid == start or mid == end:
            continue  # numerically degenerate; keep the node as a leaf

        n_left_part = float(mid - start)
        n_right_part = float(end - mid)
        sq_l = 0.0
        sq_r = 0.0
        left_counts[:] = 0.0
        for i in range(start, mid):
            left_counts[y[samples[i]]] += 1.0
        for k in range(n_classes):
            sq_l += (left_counts[k] / n_left_part) ** 2
            sq_r += ((counts[k] - left_counts[k]) / n_right_part) ** 2
        decrease = (
            n_node * impurity
            - n_left_part * (1.0 - sq_l)
            - n_right_part * (1.0 - sq_r)
        ) / n_total
        importances[best_feature] += decrease

        feature[node] = best_feature
        threshold[node] = best_threshold
        left[node] = n_nodes
        right[node] = n_nodes + 1
        stack_node[stack_size] = n_nodes
        stack_start[stack_size] = start
        stack_end[stack_size] = mid
        stack_size += 1
        stack_node[stack_size] = n_nodes + 1
        stack_start[stack_size] = mid
        stack_end[stack_size] = end
        stack_size += 1
        n_nodes += 2

    return (
        feature[:n_nodes],
        threshold[:n_nodes],
        left[:n_nodes],
        right[:n_nodes],
        value[:n_nodes],
        importances,
    )


@njit(cache=True)
def _tree_proba(X, feature, threshold, left, right, value, out):
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += value[node]


class RandomForest(ChoiceClassifier):
    def __init__(
        self,
        n_estimators: int = 100,
        max_features: str | int = "sqrt",
        bootstrap: bool = True,
        random_state: int = 0,
        classes=None,
    ):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.random_state = random_state
        self.classes = classes

    def _resolve_max_features(self, d: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(d)))
        if isinstance(self.max_features, (int, np.integer)):
            return max(1, min(int(self.max_features), d))
        raise ValidationError(f"unsupported max_features {self.max_features!r}")

    def fit(self, X, y):
        X, codes = self._encode_labels(X, y, self.classes)
        X = np.ascontiguousarray(X)
        n, d = X.shape
        k = self._resolve_max_features(d)
        self.trees_ = []
        for t in range(self.n_estimators):
            if self.bootstrap:
                idx = substream(self.random_state, "bootstrap", t).integers(0, n, size=n)
                Xt = np.ascontiguousarray(X[idx])
                yt = codes[idx]
            else:
                Xt, yt = X, codes
            seed = spawn_seed(self.random_state, "tree", t) | 1
            arrays = _grow_tree(Xt, yt, len(self.classes_), k, seed)
            self.trees_.append(
                {name: arr for name, arr in zip(("feature", "threshold", "left", "right", "value", "importances"), arrays)}
            )
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_predict_input(X)
        n_classes = len(self.classes_)
        if X.shape[0] == 0:
            return np.zeros((0, n_classes))
        X = np.ascontiguousarray(X)
        out = np.zeros((X.shape[0], n_classes))
        for tree in self.trees_:
            _tree_proba(X, tree["feature"], tree["threshold"], tree["left"], tree["right"], tree["value"], out)
        return out / len(self.trees_)

    @property
    def feature_importances_(self) -> np.ndarray:
        """Mean decrease impurity, normalized to sum to 1."""
        if not hasattr(self, "trees_"):
            raise ValidationError("forest is not fitted")
        total = np.zeros(self.n_features_in_)
        for tree in self.trees_:
            imp = tree["importances"]
            s = imp.sum()
            total += imp / s if s > 0 else imp
        s = total.sum()
        return total / s if s > 0 else total


def mdi_importances(model, feature_names=None) -> list[tuple[str, float]]:
    """Ranked (feature, importance) list from a fitted RandomForest.

    Importances are non-negative and sum to 1; rank ties break by feature
    position.
    """
    if not isinstance(model, RandomForest):
        raise ValidationError("MDI importances are defined for random forest models only")
    imp = model.feature_importances_
    if feature_names is None:
        feature_names = [f"f{i}" for i in range(imp.size)]
    if len(feature_names) != imp.size:
        raise ValidationError("feature_names length does not match the fitted width")
    order = sorted(range(imp.size), key=lambda i: (-imp[i], i))
    return [(feature_names[i], float(imp[i])) for i in order]
