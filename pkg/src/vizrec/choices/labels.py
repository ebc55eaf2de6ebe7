"""Prediction-task label sets.

Nine task variants over five design choices. Class vocabularies are fixed;
rows whose extracted choice falls outside the task vocabulary are excluded
from that task rather than remapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UsageError

VISUALIZATION_LEVEL = "visualization"
ENCODING_LEVEL = "encoding"


@dataclass(frozen=True)
class ChoiceLabelSet:
    """One prediction task: its level, the choice it reads, and the classes."""

    task_id: str
    level: str  # visualization | encoding
    choice: str  # visualization_type | has_shared_axis | mark_type | is_shared_axis | axis
    classes: tuple[str, ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


TASKS: dict[str, ChoiceLabelSet] = {
    "VT2": ChoiceLabelSet("VT2", VISUALIZATION_LEVEL, "visualization_type", ("line", "bar")),
    "VT3": ChoiceLabelSet("VT3", VISUALIZATION_LEVEL, "visualization_type", ("scatter", "line", "bar")),
    "VT6": ChoiceLabelSet(
        "VT6", VISUALIZATION_LEVEL, "visualization_type", ("scatter", "line", "bar", "box", "histogram", "pie")
    ),
    "HSA": ChoiceLabelSet("HSA", VISUALIZATION_LEVEL, "has_shared_axis", ("false", "true")),
    "MT2": ChoiceLabelSet("MT2", ENCODING_LEVEL, "mark_type", ("line", "bar")),
    "MT3": ChoiceLabelSet("MT3", ENCODING_LEVEL, "mark_type", ("scatter", "line", "bar")),
    "MT6": ChoiceLabelSet(
        "MT6", ENCODING_LEVEL, "mark_type", ("scatter", "line", "bar", "box", "histogram", "heatmap")
    ),
    "ISA": ChoiceLabelSet("ISA", ENCODING_LEVEL, "is_shared_axis", ("false", "true")),
    "XY": ChoiceLabelSet("XY", ENCODING_LEVEL, "axis", ("x", "y")),
}


def get_task(task_id: str) -> ChoiceLabelSet:
    key = task_id.strip().upper()
    if key not in TASKS:
        raise UsageError(f"unknown task {task_id!r}; expected one of {sorted(TASKS)}")
    return TASKS[key]


def visualization_label(task: ChoiceLabelSet, viz) -> str | None:
    """Task label of a chart's visualization-level choices, None if out of vocabulary."""
    if task.level != VISUALIZATION_LEVEL:
        raise UsageError(f"task {task.task_id} is not visualization-level")
    if task.choice == "visualization_type":
        value = viz.visualization_type
    else:
        value = "true" if viz.has_shared_axis else "false"
    return value if value in task.classes else None


def encoding_label(task: ChoiceLabelSet, encoding) -> str | None:
    """Task label of one column-encoding instance, None if out of vocabulary."""
    if task.level != ENCODING_LEVEL:
        raise UsageError(f"task {task.task_id} is not encoding-level")
    if task.choice == "mark_type":
        value = encoding.mark_type
    elif task.choice == "is_shared_axis":
        value = "true" if encoding.is_shared_axis else "false"
    else:
        value = encoding.axis
    return value if value in task.classes else None
