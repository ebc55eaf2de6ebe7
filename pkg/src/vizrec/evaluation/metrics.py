"""Plain accuracy: the fraction of correct predictions."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError


def accuracy(predictions, labels) -> float:
    predictions = np.asarray(predictions, dtype=object)
    labels = np.asarray(labels, dtype=object)
    if predictions.shape != labels.shape:
        raise ValidationError(
            f"predictions ({predictions.shape}) and labels ({labels.shape}) differ in length"
        )
    if predictions.size == 0:
        raise ValidationError("accuracy of zero predictions is undefined")
    return float((predictions == labels).mean())
