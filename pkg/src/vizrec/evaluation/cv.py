"""5-fold cross-validation with the full per-fold pipeline.

Each fold serves once as the test set (20%); the remainder splits
75/25 into train (60% overall) and validation (20% overall, consumed only
by the neural network). Every slice is oversampled to its majority class
independently, the preprocessor is fitted on the oversampled training
slice alone, and accuracy is reported on the balanced test slice. The
report records a leakage audit trail: which rows fed the preprocessor in
each fold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .._rng import substream
from ..models import ModelSpec, resolve_family, train_model
from ..pipeline import (
    FeaturePreprocessor,
    TaskDataset,
    make_folds,
    oversample_indices,
    stratified_two_way,
)
from .metrics import accuracy


@dataclass
class CvReport:
    """Per-fold accuracies of one (task, model, mask) configuration."""

    task_id: str
    family: str
    mask: str
    fold_accuracies: list[float]
    mean: float
    standard_error: float
    audit: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "family": self.family,
            "mask": self.mask,
            "fold_accuracies": self.fold_accuracies,
            "mean": self.mean,
            "standard_error": self.standard_error,
            "folds": len(self.fold_accuracies),
            "audit": self.audit,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def cross_validate(
    spec: ModelSpec,
    dataset: TaskDataset,
    seed: int = 0,
    folds: int = 5,
) -> CvReport:
    """Run the fold pipeline and report mean accuracy with its standard error."""
    family = resolve_family(spec.family)
    classes = list(dataset.task.classes)
    n = dataset.n_rows
    fold_indices = make_folds(n, folds, seed)
    all_rows = np.arange(n)
    fold_accuracies: list[float] = []
    audit: list[dict] = []

    for i, test_idx in enumerate(fold_indices):
        rest = np.setdiff1d(all_rows, test_idx)
        rest_labels = dataset.labels[rest]
        train_rel, val_rel = stratified_two_way(
            rest_labels, classes, 0.75, substream(seed, "cv_val", i)
        )
        train_idx = rest[train_rel]
        val_idx = rest[val_rel]

        parts = {}
        for name, idx in (("train", train_idx), ("validation", val_idx), ("test", test_idx)):
            part = dataset.take(idx)
            rng = substream(seed, "cv_oversample", i, name)
            parts[name] = part.take(oversample_indices(part.labels, classes, rng))

        preprocessor = FeaturePreprocessor().fit(parts["train"].features)
        X_train = preprocessor.transform(parts["train"].features)
        X_val = preprocessor.transform(parts["validation"].features)
        X_test = preprocessor.transform(parts["test"].features)

        fold_spec = ModelSpec(spec.family, dict(spec.hyperparameters), seed=spec.seed + i)
        model = train_model(
            fold_spec,
            X_train,
            parts["train"].labels,
            classes=classes,
            validation=(X_val, parts["validation"].labels) if family == "neural_network" else None,
        )
        fold_accuracies.append(accuracy(model.predict(X_test), parts["test"].labels))
        audit.append(
            {
                "fold": i,
                "preprocessor_fit_rows": sorted(set(parts["train"].features.row_ids)),
                "train_rows": int(parts["train"].n_rows),
                "validation_rows": int(parts["validation"].n_rows),
                "test_rows": int(parts["test"].n_rows),
            }
        )

    mean = float(np.mean(fold_accuracies))
    se = float(np.std(fold_accuracies, ddof=1) / np.sqrt(len(fold_accuracies))) if len(fold_accuracies) > 1 else 0.0
    return CvReport(
        task_id=dataset.task.task_id,
        family=family,
        mask=dataset.mask,
        fold_accuracies=fold_accuracies,
        mean=mean,
        standard_error=se,
        audit=audit,
    )
