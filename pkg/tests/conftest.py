import json

import pytest

from vizrec.ingest import Corpus, dataset_from_cells, parse_record


@pytest.fixture
def cars_dataset():
    """Three-column automobile-style dataset used by the dual-axis fixture."""
    return dataset_from_cells(
        "cars",
        [
            ("Hp", [95, 90, 97, 150, 130]),
            ("MPG", [18.0, 15.2, 16.1, 14.0, 17.5]),
            ("Wgt", [3449, 3433, 3436, 4100, 3850]),
        ],
    )


@pytest.fixture
def dual_axis_record(cars_dataset):
    """Record shaped like the dual-axis scatterplot worked example: two
    scatter traces sharing Hp on X, with MPG and Wgt on Y."""
    document = {
        "fid": "cars:1",
        "user_id": "analyst",
        "data": {
            "Hp": [95, 90, 97, 150, 130],
            "MPG": [18.0, 15.2, 16.1, 14.0, 17.5],
            "Wgt": [3449, 3433, 3436, 4100, 3850],
        },
        "specification": [
            {"type": "scatter", "x": "Hp", "y": "MPG"},
            {"type": "scatter", "x": "Hp", "y": "Wgt"},
        ],
        "layout": {"title": "dual axis"},
    }
    return parse_record(json.dumps(document))


def make_record(fid, user_id, columns, traces):
    return parse_record(
        json.dumps(
            {
                "fid": fid,
                "user_id": user_id,
                "data": columns,
                "specification": traces,
                "layout": {},
            }
        )
    )


@pytest.fixture
def tiny_corpus(dual_axis_record):
    bar = make_record(
        "r2",
        "u2",
        {"city": ["oslo", "lima", "kiev"], "pop": [10, 20, 30]},
        [{"type": "bar", "x": "city", "y": "pop"}],
    )
    line = make_record(
        "r3",
        "u3",
        {"day": [1, 2, 3, 4], "price": [9.5, 9.7, 10.1, 10.4]},
        [{"type": "line", "x": "day", "y": "price"}],
    )
    return Corpus(records=[dual_axis_record, bar, line], provenance={"source": "fixture"})
