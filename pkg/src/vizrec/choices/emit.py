"""Chart-spec emission: design choices -> trace documents.

Emission closes the recommendation loop: the produced document parses and
re-extracts to exactly the requested choices. Construction is
generate-and-verify over a small set of canonical trace patterns, so
anything emitted is round-trip exact by construction and contradictory
choice sets (for example two columns both claiming sole ownership of an
axis) are rejected with a validation error.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .extract import (
    EncodingChoices,
    VisualizationChoices,
    extract_encoding_choices,
    extract_visualization_choices,
)
from .traces import TraceSpec, traces_to_document


@dataclass(frozen=True)
class ChoiceSet:
    """A chart-level choice plus optional per-column encodings."""

    visualization: VisualizationChoices
    encodings: tuple[EncodingChoices, ...] | None = None


def default_axis_assignment(dataset) -> tuple[int, list[int]]:
    """Heuristic when only a mark type is chosen: first temporal column to X,
    else first categorical, else the first column; the rest to Y.

    Documented convention, not derived from corpus statistics.
    """
    generals = [c.general_type for c in dataset.columns]
    x_col = 0
    for wanted in ("temporal", "categorical"):
        if wanted in generals:
            x_col = generals.index(wanted)
            break
    y_cols = [i for i in range(dataset.num_columns) if i != x_col]
    return x_col, y_cols


def _candidate_patterns(
    mark: str, x_cols: list[int], y_cols: list[int], names_len: int
) -> list[list[TraceSpec]]:
    def trace(x=None, y=None):
        return TraceSpec(trace_type=mark, x_source=x, y_source=y)

    candidates: list[list[TraceSpec]] = []
    if len(x_cols) == 1 and y_cols:
        candidates.append([trace(x=x_cols[0], y=y) for y in y_cols])
    if len(y_cols) == 1 and x_cols:
        candidates.append([trace(x=x, y=y_cols[0]) for x in x_cols])
    if x_cols and len(x_cols) == len(y_cols):
        candidates.append([trace(x=x, y=y) for x, y in zip(x_cols, y_cols)])
    if x_cols or y_cols:
        candidates.append(
            [trace(x=x) for x in x_cols] + [trace(y=y) for y in y_cols]
        )
    k = min(len(x_cols), len(y_cols))
    if k and (len(x_cols) > k or len(y_cols) > k):
        zipped = [trace(x=x, y=y) for x, y in zip(x_cols[:k], y_cols[:k])]
        zipped += [trace(x=x) for x in x_cols[k:]]
        zipped += [trace(y=y) for y in y_cols[k:]]
        candidates.append(zipped)
    if len(x_cols) == 1 and len(y_cols) == 1:
        # Duplicated trace: the only way a single pairing shares an axis.
        candidates.append([trace(x=x_cols[0], y=y_cols[0])] * 2)
    return candidates


def emit_chart_spec(dataset, choices: ChoiceSet, layout: dict | None = None) -> dict:
    """Build a chart-spec document whose extraction equals ``choices``.

    Requires a homogeneous mark type. When encodings are omitted, axes are
    filled by the default assignment heuristic.
    """
    viz = choices.visualization
    if not viz.is_homogeneous or viz.visualization_type is None:
        raise ValidationError("emission requires a homogeneous visualization type")
    mark = viz.visualization_type

    encodings = choices.encodings
    if encodings is None:
        x_col, y_cols = default_axis_assignment(dataset)
        traces = (
            [TraceSpec(mark, x_col, y) for y in y_cols]
            if y_cols
            else [TraceSpec(mark, x_col, None)]
        )
        return traces_to_document(traces, dataset, layout)

    n = dataset.num_columns
    for enc in encodings:
        if not 0 <= enc.column < n:
            raise ValidationError(f"encoding references column {enc.column}, dataset has {n}")
        if enc.mark_type != mark:
            raise ValidationError(
                f"column {enc.column} wants mark {enc.mark_type!r} in a {mark!r} chart"
            )
    x_cols = sorted({e.column for e in encodings if e.axis == "x"})
    y_cols = sorted({e.column for e in encodings if e.axis == "y"})
    for axis, cols in (("x", x_cols), ("y", y_cols)):
        flags = {e.is_shared_axis for e in encodings if e.axis == axis}
        if len(flags) > 1 or (flags and flags != {len(cols) == 1}):
            raise ValidationError(
                f"contradictory choices: inconsistent sole-ownership flags on the {axis} axis"
            )

    want = (viz, tuple(sorted(encodings, key=lambda e: (e.column, e.axis, e.mark_type))))
    for traces in _candidate_patterns(mark, x_cols, y_cols, n):
        got_viz = extract_visualization_choices(traces)
        got_enc = tuple(extract_encoding_choices(traces, dataset))
        if (got_viz, got_enc) == want:
            return traces_to_document(traces, dataset, layout)
    raise ValidationError("contradictory choices: no trace arrangement reproduces them")


def choices_of_traces(traces, dataset) -> ChoiceSet:
    """Extract the full choice set of a resolved trace list."""
    return ChoiceSet(
        visualization=extract_visualization_choices(traces),
        encodings=tuple(extract_encoding_choices(traces, dataset)),
    )
