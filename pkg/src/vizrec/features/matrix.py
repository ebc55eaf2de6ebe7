"""Feature-matrix construction and serialization.

A FeatureMatrix is the bridge between the profiler and the modeling
pipeline: float64 values with NaN for missing, boolean features stored as
0/1 but flagged categorical so the preprocessor one-hot encodes them,
columns in manifest order, one row per dataset (or per column for
encoding-level tasks).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .aggregate import DatasetFeatures, aggregate_features
from .catalog import (
    DATASET_FEATURES,
    SINGLE_FEATURES,
    dataset_mask_indices,
    manifest_hash,
    single_mask_indices,
)
from .pairwise import extract_pairwise_features
from .single import extract_single_column_features

FeatureValues = dict[str, float | bool | None]


def profile_dataset(dataset) -> tuple[list[FeatureValues], list[FeatureValues], DatasetFeatures]:
    """Extract single, pairwise and aggregated features for one dataset."""
    singles = [extract_single_column_features(col) for col in dataset.columns]
    pairs = [
        extract_pairwise_features(dataset.columns[i], dataset.columns[j])
        for i in range(dataset.num_columns)
        for j in range(i + 1, dataset.num_columns)
    ]
    return singles, pairs, aggregate_features(singles, pairs, dataset)


def apply_feature_mask(features: FeatureValues, mask: str, level: str = "dataset") -> FeatureValues:
    """Restrict a feature map to the named feature-set mask."""
    if level == "dataset":
        defs, indices = DATASET_FEATURES, dataset_mask_indices(mask)
    elif level == "single":
        defs, indices = SINGLE_FEATURES, single_mask_indices(mask)
    else:
        raise ValueError(f"unknown feature level {level!r}")
    return {defs[i].name: features[defs[i].name] for i in indices}


def _to_float(value) -> float:
    if value is None:
        return float("nan")
    if isinstance(value, bool):
        return 1.0 if value else 0.0
    return float(value)


@dataclass
class FeatureMatrix:
    """Rows of masked feature values with their manifest metadata."""

    values: np.ndarray  # float64, NaN = missing
    names: list[str]
    kinds: list[str]  # categorical | numeric, aligned with names
    row_ids: list[str]
    level: str  # dataset | single
    mask: str

    def __post_init__(self):
        if self.values.shape != (len(self.row_ids), len(self.names)):
            raise ValidationError("feature matrix shape does not match metadata")
        if len(self.kinds) != len(self.names):
            raise ValidationError("kinds must align with names")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    def manifest_fingerprint(self) -> str:
        return f"{manifest_hash(self.level)}:{self.mask}"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["id", *self.names])
        for row_id, row in zip(self.row_ids, self.values):
            writer.writerow([row_id, *("" if np.isnan(v) else repr(float(v)) for v in row)])
        return out.getvalue()

    def to_jsonl(self) -> str:
        lines = []
        for row_id, row in zip(self.row_ids, self.values):
            record = {"id": row_id}
            record.update(
                {n: (None if np.isnan(v) else float(v)) for n, v in zip(self.names, row)}
            )
            lines.append(json.dumps(record, sort_keys=False))
        return "\n".join(lines) + "\n"


def _mask_metadata(mask: str, level: str) -> tuple[list[int], list[str], list[str]]:
    if level == "dataset":
        indices = list(dataset_mask_indices(mask))
        defs = DATASET_FEATURES
    else:
        indices = list(single_mask_indices(mask))
        defs = SINGLE_FEATURES
    names = [defs[i].name for i in indices]
    kinds = [defs[i].kind for i in indices]
    return indices, names, kinds


def dataset_feature_matrix(datasets, mask: str = "All", threads: int = 1) -> FeatureMatrix:
    """One row of aggregated features per dataset, in input order."""
    datasets = list(datasets)
    indices, names, kinds = _mask_metadata(mask, "dataset")

    def one(dataset):
        _, _, agg = profile_dataset(dataset)
        row = agg.as_list()
        return [_to_float(row[i]) for i in indices]

    rows = _ordered_map(one, datasets, threads)
    values = np.array(rows, dtype=float).reshape(len(datasets), len(names))
    return FeatureMatrix(values, names, kinds, [d.id for d in datasets], "dataset", mask)


def column_feature_matrix(datasets, mask: str = "All", threads: int = 1) -> FeatureMatrix:
    """One row of single-column features per column, datasets in input order."""
    datasets = list(datasets)
    indices, names, kinds = _mask_metadata(mask, "single")

    def one(dataset):
        out = []
        for position, column in enumerate(dataset.columns):
            feats = extract_single_column_features(column)
            ordered = list(feats.values())
            out.append((f"{dataset.id}:{position}", [_to_float(ordered[i]) for i in indices]))
        return out

    row_ids: list[str] = []
    rows: list[list[float]] = []
    for chunk in _ordered_map(one, datasets, threads):
        for row_id, row in chunk:
            row_ids.append(row_id)
            rows.append(row)
    values = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return FeatureMatrix(values, names, kinds, row_ids, "single", mask)


def single_feature_row(column, mask: str = "All") -> np.ndarray:
    """Masked float vector for one column; used by encoding-level tasks."""
    indices, _, _ = _mask_metadata(mask, "single")
    ordered = list(extract_single_column_features(column).values())
    return np.array([_to_float(ordered[i]) for i in indices], dtype=float)


def _ordered_map(fn, items, threads: int) -> list:
    """Map preserving input order; parallel and serial runs are bit-identical."""
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
