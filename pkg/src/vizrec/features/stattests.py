"""Pairwise statistical tests and the normality test used by the profiler.

Every test returns an optional ``(statistic, p_value)`` pair; ``None``
means the input is degenerate for that test (too few values, zero
variance, empty contingency cell) and the corresponding features are
marked missing rather than NaN.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Optional, Sequence

import numpy as np

from .special import chi2_sf, f_sf, kolmogorov_sf, t_sf_two_sided

TestResult = Optional[tuple[float, float]]


def pearson(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Pearson correlation with a two-sided p-value from the t distribution."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n != y.size:
        raise ValueError("samples must have equal length")
    if n < 3:
        return None
    xd = x - x.mean()
    yd = y - y.mean()
    sx = math.sqrt(float(xd @ xd))
    sy = math.sqrt(float(yd @ yd))
    if sx == 0.0 or sy == 0.0:
        return None
    r = float(xd @ yd) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, t_sf_two_sided(t, n - 2)


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Correlation coefficient only; tolerates n == 2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return None
    xd = x - x.mean()
    yd = y - y.mean()
    sx = math.sqrt(float(xd @ xd))
    sy = math.sqrt(float(yd @ yd))
    if sx == 0.0 or sy == 0.0:
        return None
    return max(-1.0, min(1.0, float(xd @ yd) / (sx * sy)))


def ks_two_sample(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

    Uses the Stephens small-sample correction on the effective sample size
    before evaluating the Kolmogorov distribution.
    """
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    n1, n2 = x.size, y.size
    if n1 == 0 or n2 == 0:
        return None
    pooled = np.concatenate([x, y])
    cdf1 = np.searchsorted(x, pooled, side="right") / n1
    cdf2 = np.searchsorted(y, pooled, side="right") / n2
    d = float(np.max(np.abs(cdf1 - cdf2)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    p = kolmogorov_sf((en + 0.12 + 0.11 / en) * d)
    return d, p


def chi2_contingency(a: Sequence, b: Sequence) -> TestResult:
    """Chi-square test of independence on the paired values, no continuity correction."""
    if len(a) != len(b):
        raise ValueError("samples must have equal length")
    if len(a) == 0:
        return None
    counts = Counter(zip(a, b))
    rows = sorted({k[0] for k in counts}, key=repr)
    cols = sorted({k[1] for k in counts}, key=repr)
    if len(rows) < 2 or len(cols) < 2:
        return None
    observed = np.array([[counts.get((r, c), 0) for c in cols] for r in rows], dtype=float)
    row_tot = observed.sum(axis=1, keepdims=True)
    col_tot = observed.sum(axis=0, keepdims=True)
    expected = row_tot * col_tot / observed.sum()
    if np.any(expected == 0.0):
        return None
    stat = float(((observed - expected) ** 2 / expected).sum())
    df = (len(rows) - 1) * (len(cols) - 1)
    return stat, chi2_sf(stat, df)


def anova_oneway(groups: Sequence[Sequence[float]]) -> TestResult:
    """One-way ANOVA F test over the given groups of numeric values."""
    groups = [np.asarray(g, dtype=float) for g in groups if len(g) > 0]
    k = len(groups)
    n = sum(g.size for g in groups)
    if k < 2 or n <= k:
        return None
    grand = sum(float(g.sum()) for g in groups) / n
    ssb = sum(g.size * (float(g.mean()) - grand) ** 2 for g in groups)
    ssw = sum(float(((g - g.mean()) ** 2).sum()) for g in groups)
    if ssb == 0.0:
        # Identical group means: F is exactly 0 whatever the within-variance.
        return 0.0, 1.0
    if ssw == 0.0:
        return None
    f = (ssb / (k - 1)) / (ssw / (n - k))
    return f, f_sf(f, k - 1, n - k)


def _skew_z(values: np.ndarray) -> float:
    # D'Agostino skewness test transform.
    n = values.size
    m2 = float(((values - values.mean()) ** 2).mean())
    m3 = float(((values - values.mean()) ** 3).mean())
    b1 = m3 / m2**1.5
    y = b1 * math.sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)))
    beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / ((n - 2) * (n + 5) * (n + 7) * (n + 9))
    w2 = -1.0 + math.sqrt(2.0 * (beta2 - 1.0))
    delta = 1.0 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1.0))
    y = 0.0 if y == 0 else y
    return delta * math.log(y / alpha + math.sqrt((y / alpha) ** 2 + 1.0))


def _kurtosis_z(values: np.ndarray) -> float:
    # Anscombe-Glynn kurtosis test transform.
    n = values.size
    m2 = float(((values - values.mean()) ** 2).mean())
    m4 = float(((values - values.mean()) ** 4).mean())
    b2 = m4 / (m2 * m2)
    e = 3.0 * (n - 1) / (n + 1)
    var = 24.0 * n * (n - 2) * (n - 3) / ((n + 1) ** 2 * (n + 3) * (n + 5))
    x = (b2 - e) / math.sqrt(var)
    beta1 = (
        6.0
        * (n * n - 5 * n + 2)
        / ((n + 7) * (n + 9))
        * math.sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2) * (n - 3)))
    )
    a = 6.0 + 8.0 / beta1 * (2.0 / beta1 + math.sqrt(1.0 + 4.0 / (beta1 * beta1)))
    denom = 1.0 + x * math.sqrt(2.0 / (a - 4.0))
    term = (1.0 - 2.0 / a) / denom
    term = math.copysign(abs(term) ** (1.0 / 3.0), term)
    return ((1.0 - 2.0 / (9.0 * a)) - term) / math.sqrt(2.0 / (9.0 * a))


def statistical_tests(a, b, kind: str) -> TestResult:
    """Uniform entry point over the pairwise tests.

    kind: ``pearson`` or ``ks`` on two numeric samples, ``chi2`` on two
    paired categorical samples, ``anova`` on (categories, numeric values).
    """
    if kind == "pearson":
        return pearson(a, b)
    if kind == "ks":
        return ks_two_sample(a, b)
    if kind == "chi2":
        return chi2_contingency(a, b)
    if kind == "anova":
        groups: dict = {}
        for key, value in zip(a, b):
            groups.setdefault(key, []).append(float(value))
        return anova_oneway(list(groups.values()))
    raise ValueError(f"unknown test kind {kind!r}")


def normality(values: Sequence[float]) -> TestResult:
    """D'Agostino-Pearson omnibus normality test (skewness + kurtosis).

    Requires at least 8 values and nonzero variance.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 8:
        return None
    if float(((values - values.mean()) ** 2).mean()) == 0.0:
        return None
    z1 = _skew_z(values)
    z2 = _kurtosis_z(values)
    k2 = z1 * z1 + z2 * z2
    return k2, chi2_sf(k2, 2)
