"""Chart-spec parsing: documents -> resolved traces.

A chart-spec document is JSON with ``traces: [{type, x, y, ...}]`` plus an
optional ``layout`` object that is preserved but never interpreted. Traces
reference columns of the record's dataset by name first, positional index
as a fallback. Trace types outside the supported set are preserved
verbatim and flagged unsupported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ChartSpecError

SUPPORTED_TRACE_TYPES = ("scatter", "line", "bar", "box", "histogram", "pie", "heatmap")
AXES = ("x", "y")


@dataclass(frozen=True)
class TraceSpec:
    """One trace: a mark type and the columns bound to its axis slots."""

    trace_type: str
    x_source: int | None  # column position in the dataset
    y_source: int | None
    extra: dict = field(default_factory=dict)
    supported: bool = True

    def __post_init__(self):
        if self.x_source is None and self.y_source is None:
            raise ChartSpecError(f"trace of type {self.trace_type!r} binds neither x nor y")

    def source(self, axis: str) -> int | None:
        return self.x_source if axis == "x" else self.y_source


def _resolve(reference, dataset, axis: str, trace_index: int) -> int | None:
    if reference is None:
        return None
    names = dataset.column_names()
    if isinstance(reference, str):
        if reference in names:
            return names.index(reference)
        raise ChartSpecError(f"trace {trace_index}: unresolvable {axis} reference {reference!r}")
    if isinstance(reference, bool) or not isinstance(reference, int):
        raise ChartSpecError(f"trace {trace_index}: {axis} reference must be a column name or index")
    if 0 <= reference < len(names):
        return reference
    raise ChartSpecError(f"trace {trace_index}: {axis} index {reference} out of range ({len(names)} columns)")


def parse_chart_spec(document: str | bytes | dict | list, dataset) -> list[TraceSpec]:
    """Parse and resolve a chart-spec document against a dataset.

    Raises ChartSpecError for an empty trace list, traces binding neither
    axis, or references that do not resolve.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ChartSpecError(f"chart spec is not valid JSON: {exc.msg}") from None
    if isinstance(document, dict):
        raw_traces = document.get("traces", [])
    elif isinstance(document, (list, tuple)):
        raw_traces = list(document)
    else:
        raise ChartSpecError("chart spec must be an object with `traces` or a trace list")
    if not raw_traces:
        raise ChartSpecError("chart spec contains no traces")

    traces = []
    for i, raw in enumerate(raw_traces):
        if not isinstance(raw, dict):
            raise ChartSpecError(f"trace {i} is not an object")
        trace_type = str(raw.get("type", "")).strip().lower()
        if not trace_type:
            raise ChartSpecError(f"trace {i} declares no type")
        extra = {k: v for k, v in raw.items() if k not in ("type", "x", "y")}
        traces.append(
            TraceSpec(
                trace_type=trace_type,
                x_source=_resolve(raw.get("x"), dataset, "x", i),
                y_source=_resolve(raw.get("y"), dataset, "y", i),
                extra=extra,
                supported=trace_type in SUPPORTED_TRACE_TYPES,
            )
        )
    return traces


def traces_to_document(traces: list[TraceSpec], dataset, layout: dict | None = None) -> dict:
    """Serialize traces back to the document format, referencing columns by name."""
    names = dataset.column_names()
    out = []
    for trace in traces:
        doc = {"type": trace.trace_type}
        if trace.x_source is not None:
            doc["x"] = names[trace.x_source]
        if trace.y_source is not None:
            doc["y"] = names[trace.y_source]
        doc.update(trace.extra)
        out.append(doc)
    return {"traces": out, "layout": layout or {}}
