"""Gaussian naive Bayes.

Post-pipeline features are continuous, so likelihoods are per-class
Gaussians with independent features. Variances are smoothed by
``var_smoothing`` times the largest feature variance to keep constant
features from collapsing the densities.
"""

from __future__ import annotations

import numpy as np

from .base import ChoiceClassifier


class GaussianNaiveBayes(ChoiceClassifier):
    def __init__(self, var_smoothing: float = 1e-9, classes=None):
        self.var_smoothing = var_smoothing
        self.classes = classes

    def fit(self, X, y):
        X, codes = self._encode_labels(X, y, self.classes)
        n_classes = len(self.classes_)
        n, d = X.shape
        self.class_log_prior_ = np.log(np.bincount(codes, minlength=n_classes) / n)
        self.theta_ = np.zeros((n_classes, d))
        self.var_ = np.zeros((n_classes, d))
        for k in range(n_classes):
            rows = X[codes == k]
            if rows.shape[0]:
                self.theta_[k] = rows.mean(axis=0)
                self.var_[k] = rows.var(axis=0)
        self.epsilon_ = self.var_smoothing * max(float(X.var(axis=0).max()), 1.0e-12)
        self.var_ += self.epsilon_
        return self

    def _joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        jll = np.empty((X.shape[0], len(self.classes_)))
        for k in range(len(self.classes_)):
            diff = X - self.theta_[k]
            jll[:, k] = self.class_log_prior_[k] - 0.5 * np.sum(
                np.log(2.0 * np.pi * self.var_[k]) + diff * diff / self.var_[k], axis=1
            )
        return jll

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_predict_input(X)
        if X.shape[0] == 0:
            return np.zeros((0, len(self.classes_)))
        jll = self._joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        proba = np.exp(jll)
        return proba / proba.sum(axis=1, keepdims=True)
