"""Pearson chi-square goodness-of-fit, self-contained.

The p-value comes from the regularized upper incomplete gamma function
(series below a+1, Lentz continued fraction above), so no statistics
dependency is needed.
"""

from __future__ import annotations

import math

from .errors import InsufficientDataError, InvalidParameterError

__all__ = ["chi_square_test", "gammaq"]

_EPS = 1e-14
_MAX_ITER = 10 ** 6


def _gamma_series(a: float, x: float) -> float:
    """P(a, x) by series; valid for x < a + 1."""
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


def _gamma_cf(a: float, x: float) -> float:
    """Q(a, x) by continued fraction (modified Lentz); x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammaq(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a)."""
    if a <= 0.0 or x < 0.0:
        raise InvalidParameterError(f"gammaq needs a > 0, x >= 0; "
                                    f"got a={a!r}, x={x!r}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, min(1.0, 1.0 - _gamma_series(a, x)))
    return max(0.0, min(1.0, _gamma_cf(a, x)))


def chi_square_test(observed, expected, min_bucket: float = 5.0):
    """Pearson statistic and p-value of observed counts against a pmf.

    `observed` maps outcomes to counts, `expected` maps outcomes to
    probabilities summing to 1 (include an explicit bucket for any tail
    mass).  Buckets whose expected count falls below min_bucket are
    merged smallest-first; fewer than two surviving buckets raise
    InsufficientDataError.  An observed outcome with no expected mass
    yields (inf, 0.0).
    """
    n = sum(observed.values())
    if n <= 0:
        raise InsufficientDataError("no observations")
    total = math.fsum(expected.values())
    if abs(total - 1.0) > 1e-6:
        raise InvalidParameterError(
            f"expected masses sum to {total!r}, not 1")
    if any(p < 0.0 for p in expected.values()):
        raise InvalidParameterError("negative expected mass")
    if any(k not in expected for k in observed):
        return math.inf, 0.0

    buckets = [(p * n, observed.get(k, 0)) for k, p in expected.items()
               if p > 0.0]
    buckets.sort(key=lambda b: b[0])
    merged: list[tuple[float, int]] = []
    pool_e, pool_o = 0.0, 0
    for e, o in buckets:
        pool_e += e
        pool_o += o
        if pool_e >= min_bucket:
            merged.append((pool_e, pool_o))
            pool_e, pool_o = 0.0, 0
    if pool_e > 0.0 or pool_o > 0:
        if merged:
            e, o = merged.pop()
            merged.append((e + pool_e, o + pool_o))
        else:
            merged.append((pool_e, pool_o))
    if len(merged) < 2:
        raise InsufficientDataError(
            f"only {len(merged)} bucket(s) after merging at "
            f"min_bucket={min_bucket}")

    stat = math.fsum((o - e) ** 2 / e for e, o in merged)
    df = len(merged) - 1
    return stat, gammaq(df / 2.0, stat / 2.0)
