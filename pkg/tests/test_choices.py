import json

import pytest

from vizrec._rng import substream
from vizrec.choices import (
    ChoiceSet,
    EncodingChoices,
    VisualizationChoices,
    choices_of_traces,
    emit_chart_spec,
    extract_encoding_choices,
    extract_visualization_choices,
    get_task,
    parse_chart_spec,
)
from vizrec.errors import ChartSpecError, UsageError, ValidationError
from vizrec.ingest import dataset_from_cells


class TestParse:
    def test_single_scatter(self, cars_dataset):
        traces = parse_chart_spec({"traces": [{"type": "scatter", "x": "Hp", "y": "MPG"}]}, cars_dataset)
        assert len(traces) == 1
        assert traces[0].trace_type == "scatter"
        assert traces[0].x_source == 0 and traces[0].y_source == 1

    def test_trace_list_form_and_index_references(self, cars_dataset):
        traces = parse_chart_spec(json.dumps([{"type": "bar", "x": 0, "y": 2}]), cars_dataset)
        assert traces[0].x_source == 0 and traces[0].y_source == 2

    def test_no_traces_error(self, cars_dataset):
        with pytest.raises(ChartSpecError, match="no traces"):
            parse_chart_spec({"traces": []}, cars_dataset)

    def test_trace_without_axes_error(self, cars_dataset):
        with pytest.raises(ChartSpecError, match="neither x nor y"):
            parse_chart_spec([{"type": "scatter"}], cars_dataset)

    def test_unresolvable_reference_reported(self, cars_dataset):
        with pytest.raises(ChartSpecError, match="unresolvable"):
            parse_chart_spec([{"type": "scatter", "x": "nope", "y": "MPG"}], cars_dataset)

    def test_unknown_type_preserved_and_flagged(self, cars_dataset):
        traces = parse_chart_spec([{"type": "sunburst", "x": "Hp"}], cars_dataset)
        assert traces[0].trace_type == "sunburst"
        assert traces[0].supported is False

    def test_extra_properties_preserved(self, cars_dataset):
        traces = parse_chart_spec([{"type": "bar", "x": "Hp", "orientation": "h"}], cars_dataset)
        assert traces[0].extra == {"orientation": "h"}


class TestExtract:
    def test_dual_axis_fixture(self, dual_axis_record):
        traces = parse_chart_spec(list(dual_axis_record.specification), dual_axis_record.data)
        viz = extract_visualization_choices(traces)
        assert viz.visualization_type == "scatter"
        assert viz.has_shared_axis is True
        assert viz.is_homogeneous is True
        encodings = extract_encoding_choices(traces, dual_axis_record.data)
        by_column = {e.column: e for e in encodings}
        assert by_column[0].axis == "x" and by_column[0].is_shared_axis is True
        assert by_column[1].axis == "y" and by_column[1].is_shared_axis is False
        assert by_column[2].axis == "y" and by_column[2].is_shared_axis is False
        assert all(e.mark_type == "scatter" for e in encodings)

    def test_single_bar_no_shared_axis(self, cars_dataset):
        traces = parse_chart_spec([{"type": "bar", "x": "Hp", "y": "MPG"}], cars_dataset)
        viz = extract_visualization_choices(traces)
        assert viz == VisualizationChoices("bar", False, True)

    def test_heterogeneous_types(self, cars_dataset):
        traces = parse_chart_spec(
            [{"type": "line", "x": "Hp", "y": "MPG"}, {"type": "bar", "x": "Hp", "y": "Wgt"}],
            cars_dataset,
        )
        viz = extract_visualization_choices(traces)
        assert viz.is_homogeneous is False
        assert viz.visualization_type is None

    def test_histogram_single_slot(self, cars_dataset):
        traces = parse_chart_spec([{"type": "histogram", "x": "Hp"}], cars_dataset)
        encodings = extract_encoding_choices(traces, cars_dataset)
        assert len(encodings) == 1
        assert encodings[0].axis == "x" and encodings[0].mark_type == "histogram"

    def test_column_on_both_axes_two_instances(self, cars_dataset):
        traces = parse_chart_spec([{"type": "scatter", "x": "Hp", "y": "Hp"}], cars_dataset)
        encodings = extract_encoding_choices(traces, cars_dataset)
        assert len(encodings) == 2
        assert {e.axis for e in encodings} == {"x", "y"}

    def test_trace_order_insensitive(self, dual_axis_record):
        data = dual_axis_record.data
        forward = parse_chart_spec(list(dual_axis_record.specification), data)
        backward = parse_chart_spec(list(reversed(dual_axis_record.specification)), data)
        assert extract_visualization_choices(forward) == extract_visualization_choices(backward)
        assert extract_encoding_choices(forward, data) == extract_encoding_choices(backward, data)


def _random_choice_set(rng, dataset):
    """Sample a valid choice set by generating a trace arrangement."""
    mark = ("scatter", "line", "bar", "box", "histogram", "pie", "heatmap")[int(rng.integers(7))]
    n = dataset.num_columns
    pattern = int(rng.integers(5))
    cols = list(rng.permutation(n))
    if pattern == 0:  # one x, several y
        k = int(rng.integers(1, n))
        traces = [{"type": mark, "x": int(cols[0]), "y": int(y)} for y in cols[1 : 1 + k]]
    elif pattern == 1:  # one y, several x
        k = int(rng.integers(1, n))
        traces = [{"type": mark, "x": int(x), "y": int(cols[0])} for x in cols[1 : 1 + k]]
    elif pattern == 2:  # zipped pairs
        k = max(2, n // 2)
        traces = [{"type": mark, "x": int(cols[i]), "y": int(cols[i + k])} for i in range(min(k, n - k))]
        if not traces:
            traces = [{"type": mark, "x": int(cols[0]), "y": int(cols[-1])}]
    elif pattern == 3:  # single-slot traces
        axis = "x" if rng.random() < 0.5 else "y"
        traces = [{"type": mark, axis: int(c)} for c in cols[: int(rng.integers(1, n + 1))]]
    else:  # duplicated single trace (forces a shared axis)
        traces = [{"type": mark, "x": int(cols[0]), "y": int(cols[1])}] * 2
    return parse_chart_spec(traces, dataset)


class TestEmitRoundTrip:
    def test_dual_axis_round_trip(self, dual_axis_record):
        data = dual_axis_record.data
        traces = parse_chart_spec(list(dual_axis_record.specification), data)
        wanted = choices_of_traces(traces, data)
        document = emit_chart_spec(data, wanted)
        again = choices_of_traces(parse_chart_spec(document, data), data)
        assert again == wanted

    def test_500_random_choice_sets(self):
        dataset = dataset_from_cells(
            "r", [(f"c{i}", list(range(3 + i, 8 + i))) for i in range(5)]
        )
        rng = substream(99, "roundtrip")
        for _ in range(500):
            wanted = choices_of_traces(_random_choice_set(rng, dataset), dataset)
            document = emit_chart_spec(dataset, wanted)
            again = choices_of_traces(parse_chart_spec(document, dataset), dataset)
            assert again == wanted

    def test_contradictory_choices_rejected(self, cars_dataset):
        viz = VisualizationChoices("scatter", False, True)
        encodings = (
            EncodingChoices(0, "scatter", "x", True),
            EncodingChoices(1, "scatter", "x", True),  # two columns both claiming sole X
            EncodingChoices(2, "scatter", "y", True),
        )
        with pytest.raises(ValidationError, match="contradictory"):
            emit_chart_spec(cars_dataset, ChoiceSet(viz, encodings))

    def test_heterogeneous_emission_rejected(self, cars_dataset):
        viz = VisualizationChoices(None, False, False)
        with pytest.raises(ValidationError, match="homogeneous"):
            emit_chart_spec(cars_dataset, ChoiceSet(viz))

    def test_mark_only_axis_heuristic(self):
        ds = dataset_from_cells("h", [("name", ["a", "b", "c"]), ("value", [1, 2, 3])])
        document = emit_chart_spec(
            ds, ChoiceSet(VisualizationChoices("bar", False, True))
        )
        assert document["traces"] == [{"type": "bar", "x": "name", "y": "value"}]

    def test_heuristic_prefers_temporal(self):
        ds = dataset_from_cells(
            "h",
            [("value", [1, 2]), ("when", ["2020-01-01", "2020-01-02"]), ("label", ["a", "b"])],
        )
        document = emit_chart_spec(ds, ChoiceSet(VisualizationChoices("line", False, True)))
        assert document["traces"][0]["x"] == "when"

    def test_layout_ignored_by_extraction(self, cars_dataset):
        base = [{"type": "bar", "x": "Hp", "y": "MPG"}]
        with_layout = {"traces": base, "layout": {"title": "zz", "colors": [1, 2]}}
        a = choices_of_traces(parse_chart_spec(base, cars_dataset), cars_dataset)
        b = choices_of_traces(parse_chart_spec(with_layout, cars_dataset), cars_dataset)
        assert a == b


class TestLabels:
    def test_vocabularies(self):
        assert get_task("VT6").classes == ("scatter", "line", "bar", "box", "histogram", "pie")
        assert get_task("MT6").classes == ("scatter", "line", "bar", "box", "histogram", "heatmap")
        assert get_task("VT2").classes == ("line", "bar")
        assert get_task("MT3").classes == ("scatter", "line", "bar")
        assert get_task("XY").classes == ("x", "y")

    def test_unknown_task(self):
        with pytest.raises(UsageError):
            get_task("VT9")

    def test_out_of_vocabulary_excluded(self, cars_dataset):
        from vizrec.choices import visualization_label

        traces = parse_chart_spec([{"type": "pie", "x": "Hp", "y": "MPG"}], cars_dataset)
        viz = extract_visualization_choices(traces)
        assert visualization_label(get_task("VT6"), viz) == "pie"
        assert visualization_label(get_task("VT3"), viz) is None
