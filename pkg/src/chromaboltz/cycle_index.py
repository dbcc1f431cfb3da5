"""Exact truncated cycle-index series.

The multivariate series live in variables s1, s2, ... where si has
weight i; everything of weighted degree > W is discarded.  A monomial
is a sorted tuple of (index, exponent) pairs and coefficients are exact
rationals, so this module is bit-exact and serves as the test oracle
for the floating-point evaluator and the samplers.

Constructor rules (F is the series of the argument class):

    neutral  1                     atom     s1
    union    F + G                 product  F * G
    sequence 1/(1-F)               diagonal F(s_k, s_2k, ...)
    multiset exp(sum_k F_diag_k / k)
    cycle    sum_k phi(k)/k * log(1/(1 - F_diag_k))

The infinite multiset/cycle sums truncate exactly: the k-th diagonal of
a constant-free series has minimum weight k, so terms with k > W cannot
contribute below the cap.

Substituting si <- t*x^i turns the cycle-index series of a class into
the ordinary generating function of its t-colored version; `series_f`
performs the substitution coefficientwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import dsl
from .errors import CapExceededError, InvalidParameterError

__all__ = ["CycleIndexSeries", "series_cycle_index", "series_f",
           "SERIES_WEIGHT_CAP", "totient"]

SERIES_WEIGHT_CAP = 8

Monomial = tuple[tuple[int, int], ...]     # sorted ((index, exponent), ...)


def totient(n: int) -> int:
    """Euler's totient, by trial-division factorization."""
    if n < 1:
        raise ValueError("totient is defined on positive integers")
    result = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            result -= result // d
        d += 1
    if n > 1:
        result -= result // n
    return result


def monomial_weight(m: Monomial) -> int:
    return sum(i * e for i, e in m)


def monomial_parts(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


_ONE_MONO: Monomial = ()


class _Series:
    """A truncated series: dict monomial -> Fraction, weight <= cap."""

    __slots__ = ("terms", "cap")

    def __init__(self, cap: int, terms: dict[Monomial, Fraction] | None = None):
        self.cap = cap
        self.terms = terms if terms is not None else {}

    @classmethod
    def const(cls, cap: int, value) -> "_Series":
        value = Fraction(value)
        return cls(cap, {_ONE_MONO: value} if value else {})

    @classmethod
    def variable(cls, cap: int, index: int) -> "_Series":
        if index > cap:
            return cls(cap)
        return cls(cap, {((index, 1),): Fraction(1)})

    def copy(self) -> "_Series":
        return _Series(self.cap, dict(self.terms))

    def __eq__(self, other) -> bool:
        return self.terms == other.terms

    def add(self, other: "_Series") -> "_Series":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _Series(self.cap, out)

    def mul(self, other: "_Series") -> "_Series":
        out: dict[Monomial, Fraction] = {}
        cap = self.cap
        for ma, ca in self.terms.items():
            wa = monomial_weight(ma)
            for mb, cb in other.terms.items():
                if wa + monomial_weight(mb) > cap:
                    continue
                m = _mono_mul(ma, mb)
                s = out.get(m, Fraction(0)) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return _Series(self.cap, out)

    def scale(self, value) -> "_Series":
        value = Fraction(value)
        if not value:
            return _Series(self.cap)
        return _Series(self.cap, {m: c * value for m, c in self.terms.items()})

    def diagonal(self, k: int) -> "_Series":
        """Substitute s_i -> s_{k i}; weights multiply by k."""
        if k == 1:
            return self.copy()
        out = {}
        for m, c in self.terms.items():
            if k * monomial_weight(m) <= self.cap:
                out[tuple(sorted((k * i, e) for i, e in m))] = c
        return _Series(self.cap, out)

    def constant_term(self) -> Fraction:
        return self.terms.get(_ONE_MONO, Fraction(0))

    def without_constant(self) -> "_Series":
        out = dict(self.terms)
        out.pop(_ONE_MONO, None)
        return _Series(self.cap, out)

    # -- compositions with constant-free argument ------------------------

    def _powers(self):
        """Yield self^m for m = 1..cap (self must be constant-free)."""
        p = self
        for _ in range(self.cap):
            yield p
            p = p.mul(self)

    def geometric(self) -> "_Series":
        """1/(1 - self), self constant-free."""
        out = _Series.const(self.cap, 1)
        for p in self._powers():
            out = out.add(p)
        return out

    def exp(self) -> "_Series":
        """exp(self), self constant-free."""
        out = _Series.const(self.cap, 1)
        fact = 1
        for m, p in enumerate(self._powers(), start=1):
            fact *= m
            out = out.add(p.scale(Fraction(1, fact)))
        return out

    def log_geometric(self) -> "_Series":
        """log(1/(1 - self)), self constant-free."""
        out = _Series(self.cap)
        for m, p in enumerate(self._powers(), start=1):
            out = out.add(p.scale(Fraction(1, m)))
        return out


def _series_of(expr: dsl.ClassExpr, env: dict[str, _Series],
               cap: int) -> _Series:
    if isinstance(expr, dsl.Epsilon):
        return _Series.const(cap, 1)
    if isinstance(expr, dsl.Atom):
        return _Series.variable(cap, 1)
    if isinstance(expr, dsl.Ref):
        return env[expr.name]
    if isinstance(expr, dsl.Union):
        return _series_of(expr.left, env, cap).add(
            _series_of(expr.right, env, cap))
    if isinstance(expr, dsl.Product):
        return _series_of(expr.left, env, cap).mul(
            _series_of(expr.right, env, cap))
    inner = _series_of(expr.inner, env, cap)
    if inner.constant_term():
        raise InvalidParameterError(
            f"{type(expr).__name__} over a class with neutral objects")
    if isinstance(expr, dsl.Seq):
        return inner.geometric()
    if isinstance(expr, dsl.MSet):
        acc = _Series(cap)
        for k in range(1, cap + 1):
            acc = acc.add(inner.diagonal(k).scale(Fraction(1, k)))
        return acc.exp()
    if isinstance(expr, dsl.Cyc):
        acc = _Series(cap)
        for k in range(1, cap + 1):
            d = inner.diagonal(k)
            if d.terms:
                acc = acc.add(d.log_geometric().scale(
                    Fraction(totient(k), k)))
        return acc
    raise TypeError(f"not a class expression: {expr!r}")


def _solve_system(system: dsl.SpecSystem, cap: int) -> dict[str, _Series]:
    env = {name: _Series(cap) for name in system.definitions}
    # Coefficients below weight w are fixed after w iterations for any
    # well-founded system, so cap+2 sweeps suffice; the extra sweeps
    # verify stabilization.
    for _ in range(cap + 2):
        new_env = {name: _series_of(expr, env, cap)
                   for name, expr in system.definitions.items()}
        if all(new_env[n] == env[n] for n in env):
            return new_env
        env = new_env
    raise InvalidParameterError(
        "series iteration did not stabilize; is the system well-founded?")


@dataclass
class CycleIndexSeries:
    """Exact truncated cycle-index series of one class."""

    class_name: str
    max_weight: int
    terms: dict[Monomial, Fraction]

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    def substitute(self, t: int) -> list[Fraction]:
        """Coefficients of x^0..x^W after s_i <- t*x^i."""
        out = [Fraction(0)] * (self.max_weight + 1)
        for m, c in self.terms.items():
            out[monomial_weight(m)] += c * Fraction(t) ** monomial_parts(m)
        return out


def series_cycle_index(system: dsl.SpecSystem, class_name: str,
                       max_weight: int,
                       cap: int = SERIES_WEIGHT_CAP) -> CycleIndexSeries:
    """All monomials of weighted degree <= max_weight, exactly.

    Raises CapExceededError beyond `cap` (the term count blows up
    combinatorially).
    """
    if max_weight > cap:
        raise CapExceededError(
            f"max_weight {max_weight} exceeds cap {cap}")
    if class_name not in system.definitions:
        system.expr(class_name)   # raises UnknownNameError
    env = _solve_system(system, max_weight)
    return CycleIndexSeries(class_name, max_weight,
                            dict(env[class_name].terms))


def series_f(system: dsl.SpecSystem, class_name: str, t: int,
             n_max: int, cap: int = SERIES_WEIGHT_CAP) -> list[int]:
    """Counting sequence of the t-colored class: [x^0..x^n_max].

    Exact integers, obtained by substituting s_i <- t*x^i in the
    cycle-index series.
    """
    if t < 1 or t != int(t):
        raise InvalidParameterError("t must be a positive integer")
    ci = series_cycle_index(system, class_name, n_max, cap=cap)
    coeffs = ci.substitute(int(t))
    assert all(c.denominator == 1 for c in coeffs), \
        "color substitution must produce integers"
    return [int(c) for c in coeffs]
