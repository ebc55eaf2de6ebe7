"""Design-choice extraction from chart specs, and spec emission."""

from .emit import ChoiceSet, choices_of_traces, default_axis_assignment, emit_chart_spec
from .extract import (
    EncodingChoices,
    VisualizationChoices,
    extract_encoding_choices,
    extract_visualization_choices,
)
from .labels import TASKS, ChoiceLabelSet, encoding_label, get_task, visualization_label
from .traces import SUPPORTED_TRACE_TYPES, TraceSpec, parse_chart_spec, traces_to_document

__all__ = [
    "SUPPORTED_TRACE_TYPES",
    "TASKS",
    "ChoiceLabelSet",
    "ChoiceSet",
    "EncodingChoices",
    "TraceSpec",
    "VisualizationChoices",
    "choices_of_traces",
    "default_axis_assignment",
    "emit_chart_spec",
    "encoding_label",
    "extract_encoding_choices",
    "extract_visualization_choices",
    "get_task",
    "parse_chart_spec",
    "traces_to_document",
    "visualization_label",
]
