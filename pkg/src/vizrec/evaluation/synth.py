"""Synthetic corpora with planted rules.

Desk-scale stand-in for the real corpus: generated datasets with
controllable column mixes, visualized according to a planted rule from
dataset properties to a visualization type, with an optional label-noise
fraction. Records carry real chart specifications (emitted through the
choices module), so the synthetic corpus exercises the same extraction
pipeline as ingested data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .._rng import substream
from ..choices import ChoiceSet, VisualizationChoices, emit_chart_spec
from ..errors import UsageError
from ..ingest import Corpus, CorpusRecord, Dataset, dataset_from_cells

_WORDS = (
    "alpha", "bravo", "delta", "echo", "ember", "fern", "gale", "harbor",
    "iris", "jasper", "koa", "lumen", "moss", "nova", "onyx", "pine",
)
_NAME_POOL = (
    "value", "price", "count", "score", "total", "amount", "rate", "index",
    "size", "weight", "level", "temp", "speed", "load",
)
_STRING_NAME_POOL = ("region", "label", "group", "name", "kind", "status")


@dataclass(frozen=True)
class PlantedRule:
    """Deterministic mapping from a dataset to a visualization type."""

    name: str
    vocabulary: tuple[str, ...]
    choice_for: Callable[[Dataset], str]


def _has_string_column(dataset: Dataset) -> bool:
    return any(c.specific_type == "string" for c in dataset.columns)


def _first_numeric_sorted(dataset: Dataset) -> bool:
    for col in dataset.columns:
        if col.general_type == "quantitative":
            vals = [float(v) for v in col.present_values]
            return all(a <= b for a, b in zip(vals, vals[1:]))
    return False


RULES: dict[str, PlantedRule] = {
    "string_bar_else_line": PlantedRule(
        "string_bar_else_line",
        ("line", "bar"),
        lambda ds: "bar" if _has_string_column(ds) else "line",
    ),
    "sorted_line_else_scatter": PlantedRule(
        "sorted_line_else_scatter",
        ("scatter", "line"),
        lambda ds: "line" if _first_numeric_sorted(ds) else "scatter",
    ),
}


def get_rule(name: str) -> PlantedRule:
    if name not in RULES:
        raise UsageError(f"unknown planted rule {name!r}; expected one of {sorted(RULES)}")
    return RULES[name]


def _random_numeric_column(rng, n_rows: int, sorted_values: bool) -> list[float]:
    kind = int(rng.integers(3))
    if kind == 0:
        start = float(rng.uniform(-50, 50))
        step = float(rng.uniform(0.5, 5.0))
        values = [start + step * i + float(rng.normal(0, 0.01)) for i in range(n_rows)]
    elif kind == 1:
        values = [float(rng.normal(rng.uniform(-10, 10), rng.uniform(0.5, 3.0))) for _ in range(n_rows)]
    else:
        values = [float(rng.uniform(0, 100)) for _ in range(n_rows)]
    values = [round(v, 6) for v in values]
    if sorted_values:
        values.sort()
    else:
        rng.shuffle(values)
    return values


def generate_synthetic_dataset(dataset_id: str, rng, with_string: bool) -> Dataset:
    n_rows = int(rng.integers(8, 41))
    columns: list[tuple[str, list]] = []
    n_numeric = int(rng.integers(1, 4))
    names = list(rng.permutation(_NAME_POOL))
    for j in range(n_numeric):
        sorted_values = bool(rng.random() < 0.5)
        columns.append((str(names[j]), _random_numeric_column(rng, n_rows, sorted_values)))
    if with_string:
        k = int(rng.integers(2, 5))
        categories = [str(w) for w in rng.choice(_WORDS, size=k, replace=False)]
        cells = [categories[int(rng.integers(k))] for _ in range(n_rows)]
        name = str(rng.choice(_STRING_NAME_POOL))
        position = int(rng.integers(len(columns) + 1))
        columns.insert(position, (name, cells))
    return dataset_from_cells(dataset_id, columns)


def generate_synthetic_corpus(
    rule: PlantedRule | str,
    n: int,
    noise: float = 0.0,
    seed: int = 0,
) -> Corpus:
    """n records whose visualizations follow ``rule`` with probability 1 - noise.

    Noisy labels flip to a uniformly random other class of the rule's
    vocabulary. Identical seeds reproduce the corpus exactly.
    """
    if isinstance(rule, str):
        rule = get_rule(rule)
    if not 0.0 <= noise < 1.0:
        raise UsageError("noise must be in [0, 1)")
    records = []
    for i in range(n):
        rng = substream(seed, "synth", i)
        fid = f"synth-{i:06d}"
        dataset = generate_synthetic_dataset(fid, rng, with_string=bool(rng.random() < 0.5))
        label = rule.choice_for(dataset)
        if noise > 0.0 and rng.random() < noise:
            others = [c for c in rule.vocabulary if c != label]
            label = others[int(rng.integers(len(others)))]
        document = emit_chart_spec(
            dataset,
            ChoiceSet(
                visualization=VisualizationChoices(
                    visualization_type=label, has_shared_axis=False, is_homogeneous=True
                )
            ),
        )
        records.append(
            CorpusRecord(
                fid=fid,
                user_id=f"user-{i:06d}",
                data=dataset,
                specification=tuple(document["traces"]),
                layout={},
            )
        )
    return Corpus(
        records=records,
        provenance={"source": "synthetic", "rule": rule.name, "n": n, "noise": noise, "seed": seed},
    )
