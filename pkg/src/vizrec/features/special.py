"""Special functions backing the p-values of the pairwise statistical tests.

Only what the feature extractors need: regularized incomplete gamma and
beta functions (series + Lentz continued fractions), the chi-square, F and
two-sided t survival functions built on them, and the asymptotic
Kolmogorov distribution. Accuracy is pinned by tests against tabulated
values and an independent reference implementation.
"""

from __future__ import annotations

import math

_MAX_ITER = 500
_EPS = 3e-15
_FPMIN = 1e-300


def _lower_gamma_series(a: float, x: float) -> float:
    # P(a, x) by series expansion, valid for x < a + 1.
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _upper_gamma_cf(a: float, x: float) -> float:
    # Q(a, x) by modified Lentz continued fraction, valid for x >= a + 1.
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if a <= 0 or x < 0:
        raise ValueError("require a > 0 and x >= 0")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return _lower_gamma_series(a, x)
    return 1.0 - _upper_gamma_cf(a, x)


def chi2_sf(x: float, df: float) -> float:
    """Survival function of the chi-square distribution."""
    if x <= 0:
        return 1.0
    if x < df + 1.0:
        return 1.0 - _lower_gamma_series(df / 2.0, x / 2.0)
    return _upper_gamma_cf(df / 2.0, x / 2.0)


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    # Continued fraction converges fastest when x < (a + 1) / (a + b + 2).
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def f_sf(f: float, df_num: float, df_den: float) -> float:
    """Survival function of the F distribution."""
    if f <= 0:
        return 1.0
    return reg_inc_beta(df_den / 2.0, df_num / 2.0, df_den / (df_den + df_num * f))


def t_sf_two_sided(t: float, df: float) -> float:
    """Two-sided p-value for a Student t statistic."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution, Q(lam) = 2 sum (-1)^(k-1) exp(-2 k^2 lam^2)."""
    if lam <= 0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, _MAX_ITER):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        if term <= _EPS * total or term < _FPMIN:
            break
        sign = -sign
    return min(max(2.0 * total, 0.0), 1.0)


def normal_sf(z: float) -> float:
    """Survival function of the standard normal distribution."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))
