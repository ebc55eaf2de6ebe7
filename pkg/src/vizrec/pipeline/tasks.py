"""Task-dataset construction: masked feature rows plus task labels.

Visualization-level tasks get one row of dataset-level features per chart.
Encoding-level tasks get one row of single-column features per
(column, axis-slot) instance, each instance labeled independently of its
siblings (bag of columns). Rows whose extracted choice falls outside the
task vocabulary are excluded; so are records whose chart spec fails to
parse, with reasons counted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..choices import (
    ChoiceLabelSet,
    encoding_label,
    extract_encoding_choices,
    extract_visualization_choices,
    get_task,
    parse_chart_spec,
    visualization_label,
)
from ..errors import ChartSpecError, DataError, EmptyInputError
from ..features.catalog import SINGLE_FEATURES, single_mask_indices
from ..features.matrix import FeatureMatrix, _ordered_map, _to_float, profile_dataset
from ..features.single import extract_single_column_features

logger = logging.getLogger(__name__)


@dataclass
class TaskDataset:
    """Feature rows, labels and provenance for one prediction task."""

    task: ChoiceLabelSet
    mask: str
    features: FeatureMatrix
    labels: np.ndarray  # vocabulary strings
    provenance: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def __post_init__(self):
        if len(self.labels) != self.features.n_rows or len(self.provenance) != self.features.n_rows:
            raise DataError("task dataset rows, labels and provenance must align")
        bad = set(self.labels) - set(self.task.classes)
        if bad:
            raise DataError(f"labels outside the {self.task.task_id} vocabulary: {sorted(bad)}")

    @property
    def n_rows(self) -> int:
        return self.features.n_rows

    def group_ids(self) -> list[str]:
        """Provenance key that must never span splits (user, falling back to dataset)."""
        return [p.get("user_id") or p["dataset_id"] for p in self.provenance]

    def class_counts(self) -> dict[str, int]:
        return {c: int((self.labels == c).sum()) for c in self.task.classes}

    def take(self, indices) -> "TaskDataset":
        indices = np.asarray(indices, dtype=int)
        sub = FeatureMatrix(
            values=self.features.values[indices],
            names=self.features.names,
            kinds=self.features.kinds,
            row_ids=[self.features.row_ids[i] for i in indices],
            level=self.features.level,
            mask=self.features.mask,
        )
        return TaskDataset(
            task=self.task,
            mask=self.mask,
            features=sub,
            labels=self.labels[indices],
            provenance=[self.provenance[i] for i in indices],
            skipped=[],
        )


def build_task_dataset(corpus, task_id: str, mask: str = "All", threads: int = 1) -> TaskDataset:
    """Extract features and labels for one task over a corpus."""
    task = get_task(task_id)
    records = list(corpus)
    if task.level == "visualization":
        builder = _visualization_rows
        level = "dataset"
        from ..features.catalog import DATASET_FEATURES, dataset_mask_indices

        indices = list(dataset_mask_indices(mask))
        names = [DATASET_FEATURES[i].name for i in indices]
        kinds = [DATASET_FEATURES[i].kind for i in indices]
    else:
        builder = _encoding_rows
        level = "single"
        indices = list(single_mask_indices(mask))
        names = [SINGLE_FEATURES[i].name for i in indices]
        kinds = [SINGLE_FEATURES[i].kind for i in indices]

    results = _ordered_map(lambda r: builder(r, task, indices), records, threads)

    rows: list[list[float]] = []
    labels: list[str] = []
    provenance: list[dict] = []
    row_ids: list[str] = []
    skipped: list[dict] = []
    for record, result in zip(records, results):
        if isinstance(result, dict):  # skip info
            skipped.append(result)
            continue
        for row_id, row, label, prov in result:
            row_ids.append(row_id)
            rows.append(row)
            labels.append(label)
            provenance.append(prov)
    if not rows:
        raise EmptyInputError(f"no rows with in-vocabulary labels for task {task.task_id}")
    if skipped:
        logger.info("task %s: skipped %d records", task.task_id, len(skipped))
    matrix = FeatureMatrix(
        values=np.array(rows, dtype=float),
        names=names,
        kinds=kinds,
        row_ids=row_ids,
        level=level,
        mask=mask,
    )
    return TaskDataset(task, mask, matrix, np.array(labels, dtype=object), provenance, skipped)


def _visualization_rows(record, task, indices):
    try:
        traces = parse_chart_spec(list(record.specification), record.data)
        viz = extract_visualization_choices(traces)
    except ChartSpecError as exc:
        return {"fid": record.fid, "reason": str(exc)}
    label = visualization_label(task, viz)
    if label is None:
        return []
    _, _, agg = profile_dataset(record.data)
    ordered = agg.as_list()
    row = [_to_float(ordered[i]) for i in indices]
    prov = {"dataset_id": record.fid, "user_id": record.user_id}
    return [(record.fid, row, label, prov)]


def _encoding_rows(record, task, indices):
    try:
        traces = parse_chart_spec(list(record.specification), record.data)
        encodings = extract_encoding_choices(traces, record.data)
    except ChartSpecError as exc:
        return {"fid": record.fid, "reason": str(exc)}
    out = []
    cache: dict[int, list] = {}
    for enc in encodings:
        label = encoding_label(task, enc)
        if label is None:
            continue
        if enc.column not in cache:
            feats = extract_single_column_features(record.data.columns[enc.column])
            cache[enc.column] = list(feats.values())
        ordered = cache[enc.column]
        row = [_to_float(ordered[i]) for i in indices]
        prov = {
            "dataset_id": record.fid,
            "user_id": record.user_id,
            "column": enc.column,
            "axis": enc.axis,
        }
        out.append((f"{record.fid}:{enc.column}:{enc.axis}", row, label, prov))
    return out
