"""Single-column feature extraction.

Produces exactly the 81 features declared in the catalog, in catalog
order. Features that do not apply to the column's general type, or whose
formula is undefined on the input (constant column, zero mean, fewer
values than a test requires), are present but ``None``. Numeric outputs
are always finite; a formula that would produce NaN or infinity reports
``None`` instead.

Conventions (documented once here):

* natural log for every entropy,
* population moments (ddof = 0),
* excess kurtosis (normal -> 0), standardized central moments for orders 5-10,
* linear-interpolation percentiles,
* temporal columns are converted to epoch seconds and run through the
  quantitative formulas of the Statistical, Outliers and Sequence groups.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from datetime import datetime, timezone

import numpy as np

from ..errors import ValidationError
from .catalog import SINGLE_FEATURES, SINGLE_NAMES
from .stattests import normality, pearson_r

SPACE_COEFF_THRESHOLD = 1e-3
ENTROPY_BINS = 10

FeatureValues = dict[str, float | bool | None]

_WORD_SPLIT = re.compile(r"[^0-9a-zA-Z]+")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def name_words(name: str) -> list[str]:
    """Split a column name on non-alphanumerics and camelCase boundaries."""
    parts = []
    for chunk in _WORD_SPLIT.split(name):
        if not chunk:
            continue
        parts.extend(p for p in _CAMEL.split(chunk) if p)
    return [p.lower() for p in parts]


def epoch_seconds(value: datetime) -> float:
    """Naive datetimes are read as UTC."""
    return value.replace(tzinfo=timezone.utc).timestamp()


def numeric_values(column) -> np.ndarray:
    """Non-missing values of a Q or T column as float64."""
    present = column.present_values
    if column.general_type == "temporal":
        return np.array([epoch_seconds(v) for v in present], dtype=float)
    return np.array([float(v) for v in present], dtype=float)


def _finite(value: float) -> float | None:
    value = float(value)
    return value if math.isfinite(value) else None


def sortedness(values) -> float | None:
    """Absolute correlation between the raw and the sorted values.

    1.0 for sorted input in either direction; None for constant columns,
    where the correlation is undefined.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return None
    r = pearson_r(x, np.sort(x))
    return None if r is None else abs(r)


def space_sequence_coefficients(values) -> tuple[float | None, float | None, bool | None, bool | None]:
    """Evenness of spacing: coefficient of variation of successive
    differences (linear) and successive ratios (logarithmic).

    A column "is" linearly/logarithmically spaced when the corresponding
    coefficient is <= 1e-3. Ratios require strictly positive values.
    Zero-mean gaps leave the coefficient None and the flag False.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 3:
        return None, None, None, None
    diffs = np.diff(x)
    lin = _dispersion_coefficient(diffs)
    is_lin = None if lin is None else bool(lin <= SPACE_COEFF_THRESHOLD)
    if lin is None and float(np.mean(diffs)) == 0.0:
        is_lin = False
    log = None
    is_log = None
    if np.all(x > 0):
        ratios = x[1:] / x[:-1]
        log = _dispersion_coefficient(ratios)
        is_log = None if log is None else bool(log <= SPACE_COEFF_THRESHOLD)
        if log is None and float(np.mean(ratios)) == 0.0:
            is_log = False
    return lin, log, is_lin, is_log


def _dispersion_coefficient(y: np.ndarray) -> float | None:
    mean = float(np.mean(y))
    if mean == 0.0:
        return None
    return _finite(float(np.std(y)) / abs(mean))


def gini_coefficient(values) -> float | None:
    """Mean absolute pairwise difference over twice the mean.

    Defined for non-negative data; an all-zero column scores 0.
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n < 1 or np.any(x < 0):
        return None
    mean = float(x.mean())
    if mean == 0.0:
        return 0.0
    # Sorted-form identity for sum over ordered pairs of |x_i - x_j|.
    idx = np.arange(1, n + 1, dtype=float)
    total = float(np.sum((2.0 * idx - n - 1.0) * x))
    return _finite(total / (n * n * mean))


def histogram_entropy(values, bins: int = ENTROPY_BINS) -> float | None:
    """Shannon entropy (natural log) of a fixed-bin histogram."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return None
    if float(x.min()) == float(x.max()):
        return 0.0
    counts, _ = np.histogram(x, bins=bins)
    p = counts[counts > 0] / x.size
    return _finite(-float(np.sum(p * np.log(p))))


def frequency_entropy(counts: Counter) -> float | None:
    total = sum(counts.values())
    if total == 0:
        return None
    p = np.array(list(counts.values()), dtype=float) / total
    return _finite(-float(np.sum(p * np.log(p))))


def distribution_features(values) -> FeatureValues:
    """Entropy, gini, shape moments and the normality test of a numeric column."""
    out: FeatureValues = {
        "entropy": None,
        "gini": None,
        "skewness": None,
        "kurtosis": None,
        **{f"moment_{k}": None for k in range(5, 11)},
        "normality_statistic": None,
        "normality_p": None,
        "is_normal_p05": None,
        "is_normal_p01": None,
    }
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return out
    out["entropy"] = histogram_entropy(x)
    out["gini"] = gini_coefficient(x)
    centered = x - x.mean()
    sigma2 = float(np.mean(centered**2))
    if sigma2 > 0.0:
        sigma = math.sqrt(sigma2)
        # Extreme magnitudes can overflow the higher powers; those moments
        # become missing via the _finite guard.
        with np.errstate(over="ignore", invalid="ignore"):
            out["skewness"] = _finite(float(np.mean(centered**3)) / sigma**3)
            out["kurtosis"] = _finite(float(np.mean(centered**4)) / sigma**4 - 3.0)
            for k in range(5, 11):
                out[f"moment_{k}"] = _finite(float(np.mean(centered**k)) / sigma**k)
    test = normality(x)
    if test is not None:
        stat, p = test
        out["normality_statistic"] = _finite(stat)
        out["normality_p"] = _finite(p)
        if out["normality_p"] is not None:
            # Normality is the null hypothesis: "is normal at 0.05" means the
            # omnibus test does not reject at that level.
            out["is_normal_p05"] = bool(p >= 0.05)
            out["is_normal_p01"] = bool(p >= 0.01)
    return out


def outlier_features(values) -> FeatureValues:
    """(has, %) outlier pairs at 1.5xIQR, 3xIQR, the 1st/99th percentiles, and 3 sigma."""
    names = [
        "has_outliers_1_5iqr",
        "percent_outliers_1_5iqr",
        "has_outliers_3iqr",
        "percent_outliers_3iqr",
        "has_outliers_99pct",
        "percent_outliers_99pct",
        "has_outliers_3std",
        "percent_outliers_3std",
    ]
    out: FeatureValues = {n: None for n in names}
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 4:
        return out
    q1, q3 = np.percentile(x, [25, 75])
    iqr = q3 - q1
    for label, k in (("1_5iqr", 1.5), ("3iqr", 3.0)):
        mask = (x < q1 - k * iqr) | (x > q3 + k * iqr)
        out[f"has_outliers_{label}"] = bool(mask.any())
        out[f"percent_outliers_{label}"] = float(mask.mean())
    p1, p99 = np.percentile(x, [1, 99])
    mask = (x < p1) | (x > p99)
    out["has_outliers_99pct"] = bool(mask.any())
    out["percent_outliers_99pct"] = float(mask.mean())
    mean = float(x.mean())
    sigma = float(x.std())
    mask = np.abs(x - mean) > 3.0 * sigma
    out["has_outliers_3std"] = bool(mask.any())
    out["percent_outliers_3std"] = float(mask.mean())
    return out


def _statistical_qt(x: np.ndarray) -> FeatureValues:
    names = [
        "mean", "normalized_mean", "median", "normalized_median", "range", "normalized_range",
        "var", "std", "coeff_var", "min", "max", "percentile_25", "percentile_75",
        "median_abs_dev", "avg_abs_dev", "quant_coeff_disp",
    ]
    out: FeatureValues = {n: None for n in names}
    if x.size == 0:
        return out
    mean = float(x.mean())
    vmin = float(x.min())
    vmax = float(x.max())
    median = float(np.median(x))
    out["mean"] = _finite(mean)
    out["median"] = _finite(median)
    out["range"] = _finite(vmax - vmin)
    if vmax != 0.0:
        # "normalized by max" variants; undefined when the max is zero.
        out["normalized_mean"] = _finite(mean / abs(vmax))
        out["normalized_median"] = _finite(median / abs(vmax))
        out["normalized_range"] = _finite((vmax - vmin) / abs(vmax))
    out["var"] = _finite(float(x.var()))
    std = float(x.std())
    out["std"] = _finite(std)
    if mean != 0.0:
        out["coeff_var"] = _finite(std / abs(mean))
    out["min"] = _finite(vmin)
    out["max"] = _finite(vmax)
    q1, q3 = np.percentile(x, [25, 75])
    out["percentile_25"] = _finite(float(q1))
    out["percentile_75"] = _finite(float(q3))
    out["median_abs_dev"] = _finite(float(np.median(np.abs(x - median))))
    out["avg_abs_dev"] = _finite(float(np.mean(np.abs(x - mean))))
    if float(q3 + q1) != 0.0:
        out["quant_coeff_disp"] = _finite(float((q3 - q1) / (q3 + q1)))
    return out


def _statistical_c(column) -> FeatureValues:
    names = [
        "category_entropy", "mean_value_length", "median_value_length",
        "min_value_length", "std_value_length", "max_value_length", "percent_mode",
    ]
    out: FeatureValues = {n: None for n in names}
    raw = [cell.strip() for cell, m in zip(column.raw_values, column.missing_mask) if not m]
    if not raw:
        return out
    counts = Counter(raw)
    out["category_entropy"] = frequency_entropy(counts)
    lengths = np.array([len(v) for v in raw], dtype=float)
    out["mean_value_length"] = float(lengths.mean())
    out["median_value_length"] = float(np.median(lengths))
    out["min_value_length"] = float(lengths.min())
    out["std_value_length"] = float(lengths.std())
    out["max_value_length"] = float(lengths.max())
    out["percent_mode"] = max(counts.values()) / len(raw)
    return out


def _sequence(x: np.ndarray) -> FeatureValues:
    out: FeatureValues = {
        "is_sorted": None, "is_monotonic": None, "sortedness": None,
        "lin_space_coeff": None, "log_space_coeff": None, "is_lin_space": None, "is_log_space": None,
    }
    if x.size == 0:
        return out
    diffs = np.diff(x)
    # Sorted is non-strict, monotonic is strict; both hold vacuously for a
    # single value.
    out["is_sorted"] = bool(np.all(diffs >= 0) or np.all(diffs <= 0))
    out["is_monotonic"] = bool(np.all(diffs > 0) or np.all(diffs < 0))
    out["sortedness"] = sortedness(x)
    lin, log, is_lin, is_log = space_sequence_coefficients(x)
    out["lin_space_coeff"] = lin
    out["log_space_coeff"] = log
    out["is_lin_space"] = is_lin
    out["is_log_space"] = is_log
    return out


def _uniqueness(column) -> FeatureValues:
    present = column.present_values
    out: FeatureValues = {"is_unique": None, "num_unique": None, "percent_unique": None}
    if not present:
        return out
    distinct = len({repr(v) for v in present})
    out["is_unique"] = distinct == len(present)
    out["num_unique"] = float(distinct)
    out["percent_unique"] = distinct / len(present)
    return out


def _name_features(name: str) -> FeatureValues:
    lowered = name.lower()
    return {
        "name_length": float(len(name)),
        "num_words_in_name": float(len(name_words(name))),
        "num_uppercase_in_name": float(sum(1 for c in name if c.isupper())),
        "name_starts_uppercase": bool(name[:1].isupper()),
        "x_in_name": "x" in lowered,
        "y_in_name": "y" in lowered,
        "id_in_name": "id" in lowered,
        "time_in_name": "time" in lowered,
        "digit_in_name": any(c.isdigit() for c in name),
        "whitespace_in_name": any(c.isspace() for c in name),
        "dollar_in_name": "$" in name,
        "euro_in_name": "\N{EURO SIGN}" in name,
        "pound_in_name": "\N{POUND SIGN}" in name,
        "yen_in_name": "\N{YEN SIGN}" in name,
    }


def extract_single_column_features(column) -> FeatureValues:
    """All 81 single-column features for one typed column, in catalog order."""
    general = column.general_type
    values: FeatureValues = {name: None for name in SINGLE_NAMES}

    values["length"] = float(len(column))
    values["categorical_type"] = general == "categorical"
    values["quantitative_type"] = general == "quantitative"
    values["temporal_type"] = general == "temporal"
    for specific in ("string", "boolean", "integer", "decimal", "datetime"):
        values[f"{specific}_type"] = column.specific_type == specific

    if general in ("quantitative", "temporal"):
        x = numeric_values(column)
        values.update(_statistical_qt(x))
        values.update(outlier_features(x))
        values.update(_sequence(x))
        if general == "quantitative":
            values.update(distribution_features(x))
    else:
        values.update(_statistical_c(column))

    values.update(_uniqueness(column))
    n = len(column)
    missing = column.num_missing
    values["has_missing"] = missing > 0
    values["num_missing"] = float(missing)
    values["percent_missing"] = missing / n if n else 0.0
    values.update(_name_features(column.name))

    if set(values) != set(SINGLE_NAMES):
        raise ValidationError("single-column extraction drifted from the catalog")
    return {name: values[name] for name in SINGLE_NAMES}


def applicable_single(column_general: str) -> set[str]:
    """Names of single-column features that apply to the given general type."""
    return {f.name for f in SINGLE_FEATURES if column_general in f.applies_to}
