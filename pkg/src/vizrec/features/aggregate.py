"""Dataset-level feature aggregation.

Applies the 16 aggregation functions (5 categorical, 10 quantitative, plus
the entropy of the column-type distribution) to the single-column and
pairwise feature maps, and adds the dimension counts. Missing inputs are
skipped from every aggregate; how many inputs fed each aggregate is
recorded separately so nothing about the 841-entry shape depends on the
data.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyInputError, ValidationError
from .catalog import DATASET_FEATURES, DATASET_NAMES
from .single import frequency_entropy

FeatureValues = dict[str, float | bool | None]


def _agg_num(flags: list[bool]) -> float:
    return float(sum(flags))


def _agg_percent(flags: list[bool]) -> float:
    return sum(flags) / len(flags)


def _agg_has(flags: list[bool]) -> bool:
    return any(flags)


def _agg_only_one(flags: list[bool]) -> bool:
    return sum(flags) == 1


def _agg_all(flags: list[bool]) -> bool:
    return all(flags)


def _agg_mean(x: np.ndarray) -> float:
    return float(x.mean())


def _agg_var(x: np.ndarray) -> float:
    return float(x.var())


def _agg_std(x: np.ndarray) -> float:
    return float(x.std())


def _agg_cv(x: np.ndarray) -> float | None:
    mean = float(x.mean())
    if mean == 0.0:
        return None
    return float(x.std()) / abs(mean)


def _agg_min(x: np.ndarray) -> float:
    return float(x.min())


def _agg_max(x: np.ndarray) -> float:
    return float(x.max())


def _agg_range(x: np.ndarray) -> float:
    return float(x.max() - x.min())


def _agg_normalized_range(x: np.ndarray) -> float | None:
    vmax = float(x.max())
    if vmax == 0.0:
        return None
    return float(x.max() - x.min()) / abs(vmax)


def _agg_avg_abs_dev(x: np.ndarray) -> float:
    return float(np.mean(np.abs(x - x.mean())))


def _agg_med_abs_dev(x: np.ndarray) -> float:
    return float(np.median(np.abs(x - np.median(x))))


_CATEGORICAL_AGGS = {
    "num": _agg_num,
    "percent": _agg_percent,
    "has": _agg_has,
    "only_one": _agg_only_one,
    "all": _agg_all,
}

_NUMERIC_AGGS = {
    "mean": _agg_mean,
    "var": _agg_var,
    "std": _agg_std,
    "cv": _agg_cv,
    "min": _agg_min,
    "max": _agg_max,
    "range": _agg_range,
    "normalized_range": _agg_normalized_range,
    "avg_abs_dev": _agg_avg_abs_dev,
    "med_abs_dev": _agg_med_abs_dev,
}


def aggregate_values(aggregator: str, values: list) -> float | bool | None:
    """Apply one aggregation function to the non-missing inputs."""
    if not values:
        return None
    if aggregator in _CATEGORICAL_AGGS:
        return _CATEGORICAL_AGGS[aggregator]([bool(v) for v in values])
    x = np.asarray([float(v) for v in values], dtype=float)
    result = _NUMERIC_AGGS[aggregator](x)
    if result is None or (isinstance(result, float) and not math.isfinite(result)):
        return None
    return result


@dataclass
class DatasetFeatures:
    """The 841 aggregated features plus aggregation bookkeeping."""

    values: FeatureValues
    agg_input_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if tuple(self.values) != DATASET_NAMES:
            raise ValidationError("dataset features out of catalog order")

    def as_list(self) -> list[float | bool | None]:
        return [self.values[name] for name in DATASET_NAMES]


def aggregate_features(singles: list[FeatureValues], pairs: list[FeatureValues], dataset) -> DatasetFeatures:
    """Aggregate per-column and per-pair features into the dataset vector.

    ``singles`` must hold one feature map per column and ``pairs`` one per
    unordered column pair, both in canonical (column-order) sequence;
    aggregation itself is order-invariant.
    """
    if dataset.num_columns == 0 or not singles:
        raise EmptyInputError("cannot aggregate features of a dataset with zero columns")
    if len(singles) != dataset.num_columns:
        raise ValidationError("one single-column feature map per column required")
    expected_pairs = dataset.num_columns * (dataset.num_columns - 1) // 2
    if len(pairs) != expected_pairs:
        raise ValidationError(f"expected {expected_pairs} pairwise feature maps, got {len(pairs)}")

    values: FeatureValues = {}
    counts: dict[str, int] = {}
    for spec in DATASET_FEATURES:
        if spec.source is None:
            continue
        maps = singles if spec.source_level == "single" else pairs
        inputs = [m[spec.source] for m in maps if m[spec.source] is not None]
        values[spec.name] = aggregate_values(spec.aggregator, inputs)
        counts[spec.name] = len(inputs)

    n_cols = dataset.num_columns
    n_rows = dataset.row_count
    values["number_of_columns"] = float(n_cols)
    values["number_of_rows"] = float(n_rows)
    values["number_of_cells"] = float(n_cols * n_rows)
    values["number_of_column_pairs"] = float(expected_pairs)
    type_counts = Counter(col.general_type for col in dataset.columns)
    values["data_type_entropy"] = frequency_entropy(type_counts)

    ordered = {name: values[name] for name in DATASET_NAMES}
    return DatasetFeatures(values=ordered, agg_input_counts=counts)
