"""Shared estimator plumbing for the classifier families.

The estimators follow the scikit-learn protocol (fit/predict/predict_proba,
get_params/set_params, classes_) so they compose with the wider ecosystem;
the learning algorithms themselves are implemented here from first
principles. Class order matters: the first class in ``classes`` wins
argmax ties, and callers pass the task vocabulary to make tie-breaking
follow vocabulary order.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from ..errors import ValidationError


class ChoiceClassifier(BaseEstimator, ClassifierMixin):
    """Base class: label encoding, input checks, argmax prediction."""

    def _encode_labels(self, X, y, classes=None):
        X, y = check_X_y(X, y, dtype=np.float64, ensure_all_finite=True)
        y = np.asarray(y)
        observed = [c for c in dict.fromkeys(y.tolist())]
        if classes is None:
            vocab = sorted(set(observed))
        else:
            vocab = list(classes)
            unknown = set(observed) - set(vocab)
            if unknown:
                raise ValidationError(f"labels outside the class vocabulary: {sorted(unknown)}")
        if len(set(observed)) < 2:
            raise ValidationError("training data must contain at least 2 classes")
        self.classes_ = np.asarray(vocab, dtype=object)
        index = {c: i for i, c in enumerate(vocab)}
        codes = np.array([index[v] for v in y.tolist()], dtype=np.int64)
        self.n_features_in_ = X.shape[1]
        return X, codes

    def _check_predict_input(self, X) -> np.ndarray:
        if not hasattr(self, "classes_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        X = check_array(X, dtype=np.float64, ensure_all_finite=True, ensure_min_samples=0)
        if X.shape[0] and X.shape[1] != self.n_features_in_:
            raise ValidationError(
                f"row width {X.shape[1]} does not match the fitted width {self.n_features_in_}"
            )
        return X

    def predict_proba(self, X) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        """Argmax of predict_proba; ties break toward the earlier class."""
        proba = self.predict_proba(X)
        if proba.shape[0] == 0:
            return np.asarray([], dtype=object)
        return self.classes_[np.argmax(proba, axis=1)]
