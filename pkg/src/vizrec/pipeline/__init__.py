"""Preprocessing, deduplication, task datasets, splits and folds."""

from .dedup import dataset_fingerprint, deduplicate
from .preprocess import FeaturePreprocessor
from .split import (
    SPLIT_NAMES,
    SplitPlan,
    make_folds,
    oversample_indices,
    split_and_balance,
    split_indices,
    stratified_two_way,
)
from .tasks import TaskDataset, build_task_dataset

__all__ = [
    "SPLIT_NAMES",
    "FeaturePreprocessor",
    "SplitPlan",
    "TaskDataset",
    "build_task_dataset",
    "dataset_fingerprint",
    "deduplicate",
    "make_folds",
    "oversample_indices",
    "split_and_balance",
    "split_indices",
    "stratified_two_way",
]
