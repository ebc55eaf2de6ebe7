"""Pairwise-column feature extraction.

The statistical blocks are keyed strictly on the pair of general types:
[Q-Q] needs two quantitative columns, [C-C] two categorical, [C-Q] one of
each. Pairs involving a temporal column fill only the shared-values and
names blocks. All 30 features are always present; inapplicable entries are
None.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from ..errors import ValidationError
from .catalog import PAIRWISE_NAMES
from .single import name_words, numeric_values
from .stattests import anova_oneway, chi2_contingency, ks_two_sample, pearson

FeatureValues = dict[str, float | bool | None]

NESTEDNESS_HIGH = 0.95


def edit_distance(a: str, b: str) -> tuple[int, float]:
    """Levenshtein distance, raw and normalized by the longer length."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a), 1.0 if a else 0.0
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    raw = previous[-1]
    return raw, raw / len(a)


def nestedness(a_values, b_values) -> float | None:
    """Fraction of the smaller column's unique values contained in the larger's."""
    set_a = set(a_values)
    set_b = set(b_values)
    if not set_a or not set_b:
        return None
    smaller, larger = (set_a, set_b) if len(set_a) <= len(set_b) else (set_b, set_a)
    return len(smaller & larger) / len(smaller)


def _hashable(values) -> list:
    return [repr(v) for v in values]


def _shared_value_features(a, b) -> FeatureValues:
    av = _hashable(a.present_values)
    bv = _hashable(b.present_values)
    out: FeatureValues = {
        "is_identical": None,
        "has_shared_values": None,
        "num_shared_values": None,
        "percent_shared_values": None,
        "unique_values_identical": None,
        "has_shared_unique_values": None,
        "num_shared_unique_values": None,
        "percent_shared_unique_values": None,
    }
    out["is_identical"] = a.missing_mask == b.missing_mask and a.parsed_values == b.parsed_values
    if not av or not bv:
        return out
    counts_a = Counter(av)
    counts_b = Counter(bv)
    # Multiset overlap for plain shared values, set overlap for unique ones.
    shared = sum(min(n, counts_b[v]) for v, n in counts_a.items())
    out["has_shared_values"] = shared > 0
    out["num_shared_values"] = float(shared)
    out["percent_shared_values"] = shared / min(len(av), len(bv))
    set_a, set_b = set(av), set(bv)
    inter = len(set_a & set_b)
    out["unique_values_identical"] = set_a == set_b
    out["has_shared_unique_values"] = inter > 0
    out["num_shared_unique_values"] = float(inter)
    out["percent_shared_unique_values"] = inter / len(set_a | set_b)
    return out


def _name_pair_features(a_name: str, b_name: str) -> FeatureValues:
    raw, normalized = edit_distance(a_name, b_name)
    words_a = set(name_words(a_name))
    words_b = set(name_words(b_name))
    out: FeatureValues = {
        "edit_distance": float(raw),
        "normalized_edit_distance": normalized,
        "has_shared_words": None,
        "num_shared_words": None,
        "percent_shared_words": None,
    }
    shared = len(words_a & words_b)
    out["has_shared_words"] = shared > 0
    out["num_shared_words"] = float(shared)
    if words_a and words_b:
        out["percent_shared_words"] = shared / min(len(words_a), len(words_b))
    else:
        out["percent_shared_words"] = 0.0
    return out


def _qq_features(a, b) -> FeatureValues:
    out: FeatureValues = {
        "correlation_value": None,
        "correlation_p": None,
        "correlation_significant_05": None,
        "ks_statistic": None,
        "ks_p": None,
        "ks_significant_05": None,
        "has_overlapping_range": None,
        "percent_overlapping_range": None,
    }
    xa = numeric_values(a)
    xb = numeric_values(b)
    if xa.size and xb.size:
        lo = max(float(xa.min()), float(xb.min()))
        hi = min(float(xa.max()), float(xb.max()))
        union = max(float(xa.max()), float(xb.max())) - min(float(xa.min()), float(xb.min()))
        out["has_overlapping_range"] = hi >= lo
        if union > 0:
            out["percent_overlapping_range"] = max(0.0, hi - lo) / union
        else:
            out["percent_overlapping_range"] = 1.0 if hi >= lo else 0.0
        ks = ks_two_sample(xa, xb)
        if ks is not None:
            out["ks_statistic"], out["ks_p"] = ks
            out["ks_significant_05"] = ks[1] < 0.05
    if xa.size == xb.size:
        # Correlation is positional and needs aligned non-missing rows.
        both = ~(np.array(a.missing_mask) | np.array(b.missing_mask))
        if both.sum() >= 3:
            va = _aligned_numeric(a, both)
            vb = _aligned_numeric(b, both)
            corr = pearson(va, vb)
            if corr is not None:
                out["correlation_value"], out["correlation_p"] = corr
                out["correlation_significant_05"] = corr[1] < 0.05
    return out


def _aligned_numeric(column, keep: np.ndarray) -> np.ndarray:
    values = [v for v, k in zip(column.parsed_values, keep) if k]
    if column.general_type == "temporal":
        from .single import epoch_seconds

        return np.array([epoch_seconds(v) for v in values], dtype=float)
    return np.array([float(v) for v in values], dtype=float)


def _cc_features(a, b) -> FeatureValues:
    out: FeatureValues = {
        "chi2_value": None,
        "chi2_p": None,
        "chi2_significant_05": None,
        "nestedness": None,
        "nestedness_is_1": None,
        "nestedness_above_95": None,
    }
    av = _hashable(a.present_values)
    bv = _hashable(b.present_values)
    nest = nestedness(av, bv)
    if nest is not None:
        out["nestedness"] = nest
        out["nestedness_is_1"] = nest == 1.0
        out["nestedness_above_95"] = nest > NESTEDNESS_HIGH
    both = [
        (ra, rb)
        for ra, rb, ma, mb in zip(a.parsed_values, b.parsed_values, a.missing_mask, b.missing_mask)
        if not (ma or mb)
    ]
    if both:
        test = chi2_contingency([p[0] for p in both], [p[1] for p in both])
        if test is not None:
            out["chi2_value"], out["chi2_p"] = test
            out["chi2_significant_05"] = test[1] < 0.05
    return out


def _cq_features(cat, quant) -> FeatureValues:
    out: FeatureValues = {"anova_value": None, "anova_p": None, "anova_significant_05": None}
    groups: dict[str, list[float]] = {}
    for cv, qv, cm, qm in zip(cat.parsed_values, quant.parsed_values, cat.missing_mask, quant.missing_mask):
        if cm or qm:
            continue
        groups.setdefault(repr(cv), []).append(float(qv))
    test = anova_oneway(list(groups.values()))
    if test is not None:
        out["anova_value"], out["anova_p"] = test
        out["anova_significant_05"] = test[1] < 0.05
    return out


def extract_pairwise_features(a, b) -> FeatureValues:
    """All 30 pairwise features for two equal-length columns, in catalog order."""
    if len(a) != len(b):
        raise ValidationError("pairwise features need columns of equal length from one dataset")
    values: FeatureValues = {name: None for name in PAIRWISE_NAMES}
    types = {a.general_type, b.general_type}
    if types == {"quantitative"}:
        values.update(_qq_features(a, b))
    elif types == {"categorical"}:
        values.update(_cc_features(a, b))
    elif types == {"categorical", "quantitative"}:
        cat, quant = (a, b) if a.general_type == "categorical" else (b, a)
        values.update(_cq_features(cat, quant))
    values.update(_shared_value_features(a, b))
    values.update(_name_pair_features(a.name, b.name))
    if set(values) != set(PAIRWISE_NAMES):
        raise ValidationError("pairwise extraction drifted from the catalog")
    return {name: values[name] for name in PAIRWISE_NAMES}


def pair_kind(a, b) -> str:
    """qq | cc | cq | other, for aggregation bookkeeping."""
    types = {a.general_type, b.general_type}
    if types == {"quantitative"}:
        return "qq"
    if types == {"categorical"}:
        return "cc"
    if types == {"categorical", "quantitative"}:
        return "cq"
    return "other"
