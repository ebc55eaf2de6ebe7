"""The feature catalog: names, groupings, applicability, and aggregators.

This manifest is the single source of truth for the profiler. It fixes

* 81 single-column features (1 dimension, 8 types, 58 values, 14 names),
* 30 pairwise-column features (25 values, 5 names),
* 841 dataset-level features obtained by aggregating the above and adding
  dimension counts plus the entropy of the column-type distribution.

Feature-set masks restrict to nested subsets: 15 / 52 / 717 / 841 at the
dataset level and 1 / 9 / 66 / 81 at the column level, adding the
dimensions (D), types (T), values (V) and names (N) blocks in that order.

The per-feature aggregator lists and block assignments below are a
documented convention calibrated to the published block sizes, which the
appendix tables alone do not determine. Two consequences worth flagging:
the type-distribution entropy and the dimension counts ride in the D
block, and ``moment_10`` joins the column-level masks only in the full
set. Counts are asserted at import, so any edit that breaks a cardinality
fails immediately.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

CATEGORICAL = "categorical"
NUMERIC = "numeric"

# Aggregator sets. Boolean-valued features aggregate with categorical
# aggregators, numeric features with quantitative ones.
CAT5 = ("num", "percent", "has", "only_one", "all")
CAT4 = ("num", "percent", "has", "all")
CAT3 = ("num", "percent", "has")
Q10 = ("mean", "var", "std", "cv", "min", "max", "range", "normalized_range", "avg_abs_dev", "med_abs_dev")
Q9 = ("mean", "var", "std", "min", "max", "range", "normalized_range", "avg_abs_dev", "med_abs_dev")
Q3 = ("mean", "min", "max")

AGGREGATOR_KINDS = {
    "num": NUMERIC,
    "percent": NUMERIC,
    "has": CATEGORICAL,
    "only_one": CATEGORICAL,
    "all": CATEGORICAL,
    **{name: NUMERIC for name in Q10},
}

ALL_TYPES = ("categorical", "quantitative", "temporal")
QT = ("quantitative", "temporal")
Q_ONLY = ("quantitative",)
C_ONLY = ("categorical",)


@dataclass(frozen=True)
class FeatureDef:
    """One feature: its identity, applicability, and aggregation recipe."""

    name: str
    category: str  # dimensions | types | values | names
    group: str
    kind: str  # categorical | numeric
    applies_to: tuple[str, ...]
    aggregators: tuple[str, ...]
    mask_block: str  # D | T | V | N, for column-level feature-set masks


def _f(name, category, group, kind, applies_to, aggregators, mask_block=None) -> FeatureDef:
    if mask_block is None:
        mask_block = {"dimensions": "D", "types": "T", "values": "V", "names": "N"}[category]
    return FeatureDef(name, category, group, kind, tuple(applies_to), tuple(aggregators), mask_block)


SINGLE_FEATURES: tuple[FeatureDef, ...] = (
    # --- Dimensions (1) ---
    _f("length", "dimensions", "dimensions", NUMERIC, ALL_TYPES, Q10),
    # --- Types (8): general (3) + specific (5) ---
    _f("categorical_type", "types", "general_type", CATEGORICAL, ALL_TYPES, CAT4),
    _f("quantitative_type", "types", "general_type", CATEGORICAL, ALL_TYPES, CAT4),
    _f("temporal_type", "types", "general_type", CATEGORICAL, ALL_TYPES, CAT4),
    _f("string_type", "types", "specific_type", CATEGORICAL, ALL_TYPES, CAT5),
    _f("boolean_type", "types", "specific_type", CATEGORICAL, ALL_TYPES, CAT5),
    _f("integer_type", "types", "specific_type", CATEGORICAL, ALL_TYPES, CAT5),
    _f("decimal_type", "types", "specific_type", CATEGORICAL, ALL_TYPES, CAT5),
    _f("datetime_type", "types", "specific_type", CATEGORICAL, ALL_TYPES, CAT5),
    # --- Values / Statistical [Q, T] (16) ---
    _f("mean", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("normalized_mean", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("median", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("normalized_median", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("range", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("normalized_range", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("var", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("std", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("coeff_var", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("min", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("max", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("percentile_25", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("percentile_75", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("median_abs_dev", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("avg_abs_dev", "values", "statistical_qt", NUMERIC, QT, Q10),
    _f("quant_coeff_disp", "values", "statistical_qt", NUMERIC, QT, Q10),
    # --- Values / Distribution [Q] (14) ---
    _f("entropy", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("gini", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("skewness", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("kurtosis", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_5", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_6", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_7", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_8", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_9", "values", "distribution", NUMERIC, Q_ONLY, Q10),
    _f("moment_10", "values", "distribution", NUMERIC, Q_ONLY, Q10, mask_block="N"),
    _f("normality_statistic", "values", "distribution", NUMERIC, Q_ONLY, Q3),
    _f("normality_p", "values", "distribution", NUMERIC, Q_ONLY, Q3),
    _f("is_normal_p05", "values", "distribution", CATEGORICAL, Q_ONLY, CAT5),
    _f("is_normal_p01", "values", "distribution", CATEGORICAL, Q_ONLY, CAT5),
    # --- Values / Outliers (8) ---
    _f("has_outliers_1_5iqr", "values", "outliers", CATEGORICAL, QT, CAT5),
    _f("percent_outliers_1_5iqr", "values", "outliers", NUMERIC, QT, Q10),
    _f("has_outliers_3iqr", "values", "outliers", CATEGORICAL, QT, CAT5),
    _f("percent_outliers_3iqr", "values", "outliers", NUMERIC, QT, Q10),
    _f("has_outliers_99pct", "values", "outliers", CATEGORICAL, QT, CAT5),
    _f("percent_outliers_99pct", "values", "outliers", NUMERIC, QT, Q10),
    _f("has_outliers_3std", "values", "outliers", CATEGORICAL, QT, CAT5),
    _f("percent_outliers_3std", "values", "outliers", NUMERIC, QT, Q10),
    # --- Values / Statistical [C] (7) ---
    _f("category_entropy", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("mean_value_length", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("median_value_length", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("min_value_length", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("std_value_length", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("max_value_length", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    _f("percent_mode", "values", "statistical_c", NUMERIC, C_ONLY, Q10),
    # --- Values / Sequence (7) ---
    _f("is_sorted", "values", "sequence", CATEGORICAL, QT, CAT5),
    _f("is_monotonic", "values", "sequence", CATEGORICAL, QT, CAT5),
    _f("sortedness", "values", "sequence", NUMERIC, QT, Q10),
    _f("lin_space_coeff", "values", "sequence", NUMERIC, QT, Q10),
    _f("log_space_coeff", "values", "sequence", NUMERIC, QT, Q10),
    _f("is_lin_space", "values", "sequence", CATEGORICAL, QT, CAT5),
    _f("is_log_space", "values", "sequence", CATEGORICAL, QT, CAT5),
    # --- Values / Unique (3) ---
    _f("is_unique", "values", "unique", CATEGORICAL, ALL_TYPES, CAT5),
    _f("num_unique", "values", "unique", NUMERIC, ALL_TYPES, Q10),
    _f("percent_unique", "values", "unique", NUMERIC, ALL_TYPES, Q10),
    # --- Values / Missing (3) ---
    _f("has_missing", "values", "missing", CATEGORICAL, ALL_TYPES, CAT5),
    _f("num_missing", "values", "missing", NUMERIC, ALL_TYPES, Q10),
    _f("percent_missing", "values", "missing", NUMERIC, ALL_TYPES, Q10),
    # --- Names / Properties (4) ---
    _f("name_length", "names", "name_properties", NUMERIC, ALL_TYPES, Q10),
    _f("num_words_in_name", "names", "name_properties", NUMERIC, ALL_TYPES, Q10),
    _f("num_uppercase_in_name", "names", "name_properties", NUMERIC, ALL_TYPES, Q10),
    _f("name_starts_uppercase", "names", "name_properties", CATEGORICAL, ALL_TYPES, CAT5),
    # --- Names / Value (10) ---
    _f("x_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("y_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("id_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("time_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("digit_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("whitespace_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("dollar_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("euro_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("pound_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
    _f("yen_in_name", "names", "name_value", CATEGORICAL, ALL_TYPES, CAT5),
)

# Pairwise applicability is expressed over the (general, general) pair of the
# two columns: "qq" both quantitative, "cc" both categorical, "cq" one of
# each, "any" always.
PAIRWISE_FEATURES: tuple[FeatureDef, ...] = (
    # --- Values / [Q-Q] (8) ---
    _f("correlation_value", "values", "qq", NUMERIC, ("qq",), Q9),
    _f("correlation_p", "values", "qq", NUMERIC, ("qq",), Q9),
    _f("correlation_significant_05", "values", "qq", CATEGORICAL, ("qq",), CAT3),
    _f("ks_statistic", "values", "qq", NUMERIC, ("qq",), Q9),
    _f("ks_p", "values", "qq", NUMERIC, ("qq",), Q9),
    _f("ks_significant_05", "values", "qq", CATEGORICAL, ("qq",), CAT3),
    _f("has_overlapping_range", "values", "qq", CATEGORICAL, ("qq",), CAT3),
    _f("percent_overlapping_range", "values", "qq", NUMERIC, ("qq",), Q9),
    # --- Values / [C-C] (6) ---
    _f("chi2_value", "values", "cc", NUMERIC, ("cc",), Q9),
    _f("chi2_p", "values", "cc", NUMERIC, ("cc",), Q9),
    _f("chi2_significant_05", "values", "cc", CATEGORICAL, ("cc",), CAT3),
    _f("nestedness", "values", "cc", NUMERIC, ("cc",), Q9),
    _f("nestedness_is_1", "values", "cc", CATEGORICAL, ("cc",), CAT3),
    _f("nestedness_above_95", "values", "cc", CATEGORICAL, ("cc",), CAT3),
    # --- Values / [C-Q] (3) ---
    _f("anova_value", "values", "cq", NUMERIC, ("cq",), Q9),
    _f("anova_p", "values", "cq", NUMERIC, ("cq",), Q9),
    _f("anova_significant_05", "values", "cq", CATEGORICAL, ("cq",), CAT3),
    # --- Values / Shared values (8) ---
    _f("is_identical", "values", "shared_values", CATEGORICAL, ("any",), CAT3),
    _f("has_shared_values", "values", "shared_values", CATEGORICAL, ("any",), CAT3),
    _f("num_shared_values", "values", "shared_values", NUMERIC, ("any",), Q9),
    _f("percent_shared_values", "values", "shared_values", NUMERIC, ("any",), Q9),
    _f("unique_values_identical", "values", "shared_values", CATEGORICAL, ("any",), CAT3),
    _f("has_shared_unique_values", "values", "shared_values", CATEGORICAL, ("any",), CAT3),
    _f("num_shared_unique_values", "values", "shared_values", NUMERIC, ("any",), Q9),
    _f("percent_shared_unique_values", "values", "shared_values", NUMERIC, ("any",), Q9),
    # --- Names / Character (2) ---
    _f("edit_distance", "names", "name_character", NUMERIC, ("any",), Q9),
    _f("normalized_edit_distance", "names", "name_character", NUMERIC, ("any",), Q9),
    # --- Names / Word (3) ---
    _f("has_shared_words", "names", "name_word", CATEGORICAL, ("any",), CAT3),
    _f("num_shared_words", "names", "name_word", NUMERIC, ("any",), Q9),
    _f("percent_shared_words", "names", "name_word", NUMERIC, ("any",), Q9),
)


@dataclass(frozen=True)
class DatasetFeatureDef:
    """One dataset-level feature: an (aggregator, source) pair or a direct value."""

    name: str
    block: str  # D | T | V | N
    source: str | None  # source feature name; None for direct dataset features
    source_level: str | None  # single | pairwise | None
    aggregator: str | None
    kind: str


def _dataset_features() -> tuple[DatasetFeatureDef, ...]:
    defs: list[DatasetFeatureDef] = []

    def add_aggregates(feature: FeatureDef, level: str, block: str) -> None:
        for agg in feature.aggregators:
            defs.append(
                DatasetFeatureDef(
                    name=f"{agg}_{feature.name}",
                    block=block,
                    source=feature.name,
                    source_level=level,
                    aggregator=agg,
                    kind=AGGREGATOR_KINDS[agg],
                )
            )

    # D block: aggregated column length, dimension counts, type entropy.
    add_aggregates(SINGLE_FEATURES[0], "single", "D")
    for name in ("number_of_columns", "number_of_rows", "number_of_cells", "number_of_column_pairs"):
        defs.append(DatasetFeatureDef(name, "D", None, None, None, NUMERIC))
    defs.append(DatasetFeatureDef("data_type_entropy", "D", None, None, None, NUMERIC))

    # T block, then V and N: single-column aggregates first, pairwise after.
    for feature in SINGLE_FEATURES:
        if feature.category == "types":
            add_aggregates(feature, "single", "T")
    for feature in SINGLE_FEATURES:
        if feature.category == "values":
            add_aggregates(feature, "single", "V")
    for feature in PAIRWISE_FEATURES:
        if feature.category == "values":
            add_aggregates(feature, "pairwise", "V")
    for feature in SINGLE_FEATURES:
        if feature.category == "names":
            add_aggregates(feature, "single", "N")
    for feature in PAIRWISE_FEATURES:
        if feature.category == "names":
            add_aggregates(feature, "pairwise", "N")
    return tuple(defs)


DATASET_FEATURES: tuple[DatasetFeatureDef, ...] = _dataset_features()

SINGLE_NAMES: tuple[str, ...] = tuple(f.name for f in SINGLE_FEATURES)
PAIRWISE_NAMES: tuple[str, ...] = tuple(f.name for f in PAIRWISE_FEATURES)
DATASET_NAMES: tuple[str, ...] = tuple(f.name for f in DATASET_FEATURES)

MASKS = ("D", "D+T", "D+T+V", "All")
_BLOCKS_OF_MASK = {"D": ("D",), "D+T": ("D", "T"), "D+T+V": ("D", "T", "V"), "All": ("D", "T", "V", "N")}


def single_mask_indices(mask: str) -> tuple[int, ...]:
    """Column-level feature indices selected by a feature-set mask."""
    blocks = _BLOCKS_OF_MASK[_normalize_mask(mask)]
    return tuple(i for i, f in enumerate(SINGLE_FEATURES) if f.mask_block in blocks)


def dataset_mask_indices(mask: str) -> tuple[int, ...]:
    """Dataset-level feature indices selected by a feature-set mask."""
    blocks = _BLOCKS_OF_MASK[_normalize_mask(mask)]
    return tuple(i for i, f in enumerate(DATASET_FEATURES) if f.block in blocks)


def _normalize_mask(mask: str) -> str:
    key = mask.strip().lower().replace(" ", "")
    aliases = {"d": "D", "d+t": "D+T", "d+t+v": "D+T+V", "all": "All", "d+t+v+n": "All"}
    if key not in aliases:
        raise ValueError(f"unknown feature mask {mask!r}; expected one of {MASKS}")
    return aliases[key]


def manifest() -> dict:
    """Machine-readable manifest shipped with feature matrices."""
    return {
        "version": 1,
        "single": [f.__dict__ for f in SINGLE_FEATURES],
        "pairwise": [f.__dict__ for f in PAIRWISE_FEATURES],
        "dataset": [d.__dict__ for d in DATASET_FEATURES],
        "masks": {
            "single": {m: len(single_mask_indices(m)) for m in MASKS},
            "dataset": {m: len(dataset_mask_indices(m)) for m in MASKS},
        },
    }


def manifest_hash(level: str = "dataset") -> str:
    """Stable hash of the feature names and kinds at the given level."""
    if level == "dataset":
        payload = [(d.name, d.kind) for d in DATASET_FEATURES]
    elif level == "single":
        payload = [(f.name, f.kind) for f in SINGLE_FEATURES]
    elif level == "pairwise":
        payload = [(f.name, f.kind) for f in PAIRWISE_FEATURES]
    else:
        raise ValueError(f"unknown manifest level {level!r}")
    return hashlib.sha256(json.dumps(payload).encode("utf-8")).hexdigest()


def _assert_cardinalities() -> None:
    assert len(SINGLE_FEATURES) == 81, len(SINGLE_FEATURES)
    assert len(PAIRWISE_FEATURES) == 30, len(PAIRWISE_FEATURES)
    assert len(DATASET_FEATURES) == 841, len(DATASET_FEATURES)
    assert len(set(SINGLE_NAMES)) == 81 and len(set(PAIRWISE_NAMES)) == 30
    assert len(set(DATASET_NAMES)) == 841
    expected_single = {"D": 1, "D+T": 9, "D+T+V": 66, "All": 81}
    expected_dataset = {"D": 15, "D+T": 52, "D+T+V": 717, "All": 841}
    for mask in MASKS:
        assert len(single_mask_indices(mask)) == expected_single[mask], mask
        assert len(dataset_mask_indices(mask)) == expected_dataset[mask], mask


_assert_cardinalities()
