"""K-nearest neighbors with a Euclidean metric.

Prediction is the majority vote of the k nearest stored rows. Everything
about neighbor selection is deterministic: candidates are ordered by
distance, then class index, then insertion order, so distance ties always
resolve toward the earlier class in the vocabulary.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import ChoiceClassifier


class KNearestNeighbors(ChoiceClassifier):
    def __init__(self, n_neighbors: int = 5, classes=None):
        self.n_neighbors = n_neighbors
        self.classes = classes

    def fit(self, X, y):
        X, codes = self._encode_labels(X, y, self.classes)
        if self.n_neighbors < 1:
            raise ValidationError("n_neighbors must be >= 1")
        self.X_ = X
        self.y_codes_ = codes
        self._sq_norms = np.einsum("ij,ij->i", X, X)
        return self

    def _neighbor_codes(self, X: np.ndarray) -> np.ndarray:
        k = min(self.n_neighbors, self.X_.shape[0])
        # Squared Euclidean distances via the expansion |a-b|^2 = |a|^2 - 2ab + |b|^2.
        d2 = self._sq_norms[None, :] - 2.0 * (X @ self.X_.T)
        d2 += np.einsum("ij,ij->i", X, X)[:, None]
        np.maximum(d2, 0.0, out=d2)
        n_train = self.X_.shape[0]
        order_rows = np.empty((X.shape[0], k), dtype=np.int64)
        tie_rank = self.y_codes_ * n_train + np.arange(n_train)
        for i in range(X.shape[0]):
            order = np.lexsort((tie_rank, d2[i]))
            order_rows[i] = order[:k]
        return self.y_codes_[order_rows]

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_predict_input(X)
        n_classes = len(self.classes_)
        if X.shape[0] == 0:
            return np.zeros((0, n_classes))
        votes = self._neighbor_codes(X)
        proba = np.zeros((X.shape[0], n_classes))
        for i in range(X.shape[0]):
            proba[i] = np.bincount(votes[i], minlength=n_classes)
        return proba / proba.sum(axis=1, keepdims=True)
