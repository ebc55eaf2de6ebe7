"""Design-choice extraction from resolved traces.

Encoding-level choices describe how a single column is visually encoded:
its mark type, the axis slot it sits on, and whether it is the only column
on that axis (the ISA label). Visualization-level choices describe the
chart: the type shared by all traces (defined only for homogeneous
charts) and whether at least two traces reference the same column on the
same axis (shared axis).

Extraction is insensitive to trace order and ignores layout entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ChartSpecError
from .traces import AXES, TraceSpec


@dataclass(frozen=True)
class VisualizationChoices:
    """Chart-level design choices."""

    visualization_type: str | None  # None when trace types are heterogeneous
    has_shared_axis: bool
    is_homogeneous: bool

    def __post_init__(self):
        if (self.visualization_type is not None) != self.is_homogeneous:
            raise ChartSpecError("visualization_type must be present exactly for homogeneous charts")


@dataclass(frozen=True)
class EncodingChoices:
    """Design choices for one (column, axis-slot) instance."""

    column: int
    mark_type: str
    axis: str  # x | y
    is_shared_axis: bool  # ISA: the only column encoded on this axis


def extract_visualization_choices(traces: list[TraceSpec]) -> VisualizationChoices:
    """Chart-level choices from at least one resolved trace."""
    if not traces:
        raise ChartSpecError("cannot extract choices from an empty trace list")
    types = {t.trace_type for t in traces}
    homogeneous = len(types) == 1
    shared = False
    for axis in AXES:
        refs = [t.source(axis) for t in traces if t.source(axis) is not None]
        if any(refs.count(c) >= 2 for c in set(refs)):
            shared = True
            break
    return VisualizationChoices(
        visualization_type=types.pop() if homogeneous else None,
        has_shared_axis=shared,
        is_homogeneous=homogeneous,
    )


def extract_encoding_choices(traces: list[TraceSpec], dataset) -> list[EncodingChoices]:
    """Per-column encoding choices, one instance per (column, axis, mark type).

    A column referenced on both axes yields two instances. Columns not
    referenced by any trace yield none.
    """
    if not traces:
        raise ChartSpecError("cannot extract choices from an empty trace list")
    columns_on_axis: dict[str, set[int]] = {axis: set() for axis in AXES}
    for trace in traces:
        for axis in AXES:
            source = trace.source(axis)
            if source is not None:
                columns_on_axis[axis].add(source)

    seen: set[tuple[int, str, str]] = set()
    out: list[EncodingChoices] = []
    for trace in traces:
        for axis in AXES:
            source = trace.source(axis)
            if source is None:
                continue
            key = (source, axis, trace.trace_type)
            if key in seen:
                continue
            seen.add(key)
            out.append(
                EncodingChoices(
                    column=source,
                    mark_type=trace.trace_type,
                    axis=axis,
                    is_shared_axis=len(columns_on_axis[axis]) == 1,
                )
            )
    out.sort(key=lambda e: (e.column, e.axis, e.mark_type))
    return out
