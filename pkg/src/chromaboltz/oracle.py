"""Pointwise evaluation of the colored generating functions.

Under the substitution s_i = t*x^i, every class of a system gets the
scalar series f(x, t); the samplers need its values at the shifted
arguments x^k for k = 1..K_max (the k-th diagonal of a class evaluates
to f(x^k, t)).  `build_oracle` fills that table by iterating the
constructor rules to a fixed point:

    eps 1                atom t*x^k
    union a + b          product a * b
    seq 1/(1 - a)        mset exp(sum_j a(x^(jk))/j)
    cyc sum_j phi(j)/j * log(1/(1 - a(x^(jk))))

Recursive systems start from zero and iterate until the sup-norm change
drops below tau; the iteration is monotone increasing, so crossing the
value cap or the iteration bound signals x at or above the dominant
singularity.  The multiset/cycle sums are truncated at K_max, chosen so
the geometric tail beyond it stays below tau (the residual is lumped
into the last index of every sampling law, keeping distributions
normalized).

`tune` solves x * d/dx f / f = target by bisection with a
divergence-aware upper bracket; `min_parts` runs a min-plus dynamic
program over the system structure to find the smallest number of
partition parts among profiles of a given weight, never expanding the
cycle-index series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import dsl
from ._flat import ATOM, CYC, EPS, MSET, PROD, SEQ, UNION, FlatSystem, flatten
from .cycle_index import totient
from .errors import (CapExceededError, DivergenceError, InvalidParameterError,
                     NoProfileError, NoSolutionError)

__all__ = ["OracleTable", "build_oracle", "eval_f", "eval_diag",
           "expected_size", "tune", "min_parts", "min_parts_table",
           "MinPartsTable"]

VALUE_CAP = 1e15
_LOG_CAP = math.log(VALUE_CAP)
MAX_SWEEPS = 10 ** 6
_K_LIMIT = 4096


def _as_flat(system) -> FlatSystem:
    return system if isinstance(system, FlatSystem) else flatten(system)


@dataclass(eq=False)
class OracleTable:
    """Values f_class(x^k, t) for every node of a system, k = 1..k_max.

    Immutable after construction; lookups beyond k_max return 0.0 (the
    tail bound guarantees the dropped mass is below tau).
    """

    flat: FlatSystem
    x: float
    t: float
    tau: float
    k_max: int
    values: list[list[float]]       # [node][k-1]
    sweeps: int

    @property
    def system(self) -> dsl.SpecSystem:
        return self.flat.system

    def value(self, class_name: str, k: int = 1) -> float:
        return self.value_node(self.flat.node_for(class_name), k)

    def value_node(self, idx: int, k: int) -> float:
        if k <= self.k_max:
            return self.values[idx][k - 1]
        return 0.0


def _evaluate(flat: FlatSystem, x: float, t: float, tau: float,
              k_count: int, max_sweeps: int) -> tuple[list[list[float]], int]:
    """Fixed-point iteration of the scalar system at scales 1..k_count."""
    n = flat.n_nodes
    ops, left, right = flat.ops, flat.left, flat.right
    phi = [0] + [totient(j) for j in range(1, k_count + 1)]
    tx = [0.0] * (k_count + 1)
    for k in range(1, k_count + 1):
        tx[k] = t * x ** k

    v = [[0.0] * k_count for _ in range(n)]
    for sweep in range(1, max_sweeps + 1):
        delta = 0.0
        for i in range(n):
            op = ops[i]
            row = v[i]
            if op == EPS:
                if sweep > 1:
                    continue
                for k in range(k_count):
                    row[k] = 1.0
                delta = max(delta, 1.0)
                continue
            if op == ATOM:
                if sweep > 1:
                    continue
                for k in range(k_count):
                    row[k] = tx[k + 1]
                delta = max(delta, tx[1])
                continue
            a = left[i]
            va = v[a]
            if op == UNION:
                vb = v[right[i]]
                for k in range(k_count):
                    new = va[k] + vb[k]
                    d = abs(new - row[k])
                    if d > delta:
                        delta = d
                    row[k] = new
            elif op == PROD:
                vb = v[right[i]]
                for k in range(k_count):
                    new = va[k] * vb[k]
                    if new > VALUE_CAP:
                        raise DivergenceError(
                            f"value blow-up in {flat.describe(i)} node "
                            f"at x={x!r}")
                    d = abs(new - row[k])
                    if d > delta:
                        delta = d
                    row[k] = new
            elif op == SEQ:
                for k in range(k_count):
                    f = va[k]
                    if f >= 1.0:
                        raise InvalidParameterError(
                            f"Seq argument reaches {f:.6g} >= 1 at "
                            f"x={x!r} (scale {k + 1})")
                    new = 1.0 / (1.0 - f)
                    d = abs(new - row[k])
                    if d > delta:
                        delta = d
                    row[k] = new
            elif op == MSET:
                for k in range(k_count):
                    s = 0.0
                    kk = k + 1
                    for j in range(1, k_count // kk + 1):
                        s += va[j * kk - 1] / j
                    if s > _LOG_CAP:
                        raise DivergenceError(
                            f"MSet exponent {s:.3g} too large at x={x!r}")
                    new = math.exp(s)
                    d = abs(new - row[k])
                    if d > delta:
                        delta = d
                    row[k] = new
            elif op == CYC:
                for k in range(k_count):
                    s = 0.0
                    kk = k + 1
                    for j in range(1, k_count // kk + 1):
                        f = va[j * kk - 1]
                        if f >= 1.0:
                            raise InvalidParameterError(
                                f"Cyc argument reaches {f:.6g} >= 1 at "
                                f"x={x!r} (scale {j * kk})")
                        if f > 0.0:
                            s -= phi[j] / j * math.log1p(-f)
                    if s > VALUE_CAP:
                        raise DivergenceError(
                            f"Cyc value too large at x={x!r}")
                    new = s
                    d = abs(new - row[k])
                    if d > delta:
                        delta = d
                    row[k] = new
        if delta <= tau:
            return v, sweep
    raise DivergenceError(
        f"no fixed point within {max_sweeps} sweeps at x={x!r} "
        f"(x at or above the singularity, or tau too small)")


def _tail_bounds(flat: FlatSystem, v: list[list[float]], x: float,
                 k_count: int) -> list[tuple[int, bool, float]]:
    """Per MSet/Cyc node: (inner idx, is_cyc, bound on the tail beyond
    k_count of the scale-1 law masses)."""
    out = []
    geom = 0.0 if x == 0.0 else x / (1.0 - x)
    for i in range(flat.n_nodes):
        op = flat.ops[i]
        if op not in (MSET, CYC):
            continue
        a = flat.left[i]
        u = v[a][k_count - 1]
        if op == MSET:
            bound = u * geom / (k_count + 1)
        else:
            # phi(j)/j <= 1 and log(1/(1-f)) <= 2f for f <= 1/2.
            bound = math.inf if u > 0.5 else 2.0 * u * geom
        out.append((a, op == CYC, bound))
    return out


def build_oracle(system, x: float, t: float, tau: float = 1e-12,
                 max_sweeps: int = MAX_SWEEPS) -> OracleTable:
    """Evaluate all classes of the system at s_i = t*x^i.

    K_max is the smallest truncation depth whose tail mass stays below
    tau for every multiset/cycle node.
    """
    flat = _as_flat(system)
    if not (x >= 0.0) or not (t > 0.0):
        raise InvalidParameterError(
            f"need x >= 0 and t > 0, got x={x!r}, t={t!r}")
    has_laws = any(op in (MSET, CYC) for op in flat.ops)
    if has_laws:
        if x >= 1.0:
            raise InvalidParameterError(
                "multiset/cycle tails require x < 1")
        for i in range(flat.n_nodes):
            if flat.ops[i] in (MSET, CYC) and \
                    flat.min_sizes[flat.left[i]] == 0:
                raise InvalidParameterError(
                    f"{flat.describe(i)} over a class with neutral "
                    f"objects; run validate()")

    k_count = 16 if has_laws else 1
    while True:
        v, sweeps = _evaluate(flat, x, t, tau, k_count, max_sweeps)
        if x == 0.0 or not has_laws:
            k_max = 1
            break
        bounds = _tail_bounds(flat, v, x, k_count)
        if all(b < tau for _, _, b in bounds):
            # Trim to the smallest adequate K: exact partial tails from
            # the computed values plus the bound beyond k_count.
            k_max = 1
            for a, is_cyc, beyond in bounds:
                tail = beyond
                k = k_count
                while k > 1:
                    f = v[a][k - 1]
                    term = (-math.log1p(-f) if is_cyc else f / k)
                    if tail + term >= tau:
                        break
                    tail += term
                    k -= 1
                k_max = max(k_max, k)
            break
        if k_count >= _K_LIMIT:
            raise DivergenceError(
                f"tail mass not below tau={tau!r} even at "
                f"K={_K_LIMIT}; x too close to 1?")
        k_count *= 2

    values = [row[:k_max] for row in v]
    return OracleTable(flat, x, t, tau, k_max, values, sweeps)


def eval_f(system, class_name: str, x: float, t: float,
           tau: float = 1e-12, max_sweeps: int = MAX_SWEEPS) -> float:
    """f_class(x, t) to accuracy tau."""
    table = build_oracle(system, x, t, tau=tau, max_sweeps=max_sweeps)
    return table.value(class_name, 1)


def eval_diag(system, class_name: str, k: int, x: float, t: float,
              tau: float = 1e-12) -> float:
    """Value of the k-th diagonal: f_class(x^k, t)."""
    if k < 1:
        raise InvalidParameterError("diagonal index must be positive")
    return eval_f(system, class_name, x ** k, t, tau=tau)


# ---------------------------------------------------------------------------
# Expected size and tuning
# ---------------------------------------------------------------------------

def expected_size(system, class_name: str, x: float, t: float,
                  tau: float = 1e-12, max_sweeps: int = MAX_SWEEPS) -> float:
    """x * d/dx f / f, the mean object size of the Boltzmann law.

    The derivative is a central finite difference with relative step
    1e-6 (the oracle stays a black box).
    """
    flat = _as_flat(system)
    h = 1e-6 * x
    if h == 0.0:
        return 0.0
    f = eval_f(flat, class_name, x, t, tau=tau, max_sweeps=max_sweeps)
    fp = eval_f(flat, class_name, x + h, t, tau=tau, max_sweeps=max_sweeps)
    fm = eval_f(flat, class_name, x - h, t, tau=tau, max_sweeps=max_sweeps)
    if f <= 0.0:
        raise InvalidParameterError(f"f({x!r}, {t!r}) = {f!r} <= 0")
    return x * (fp - fm) / (2.0 * h * f)


_TUNE_SWEEPS = 20000
_HI_CAP = 2.0 ** 40


def tune(system, class_name: str, t: float, target_n: float,
         eps_solver: float = 1e-9, tau: float = 1e-12) -> float:
    """Parameter x0 with expected size target_n, by bisection.

    The upper bracket shrinks on DivergenceError, so no prior estimate
    of the singularity is needed.  Raises NoSolutionError (carrying the
    best point found) when the expected size stays below the target on
    the whole convergence interval.
    """
    if target_n < 1:
        raise InvalidParameterError("target size must be >= 1")
    flat = _as_flat(system)

    def esize(x: float) -> float | None:
        try:
            return expected_size(flat, class_name, x, t, tau=tau,
                                 max_sweeps=_TUNE_SWEEPS)
        except (DivergenceError, InvalidParameterError):
            return None

    lo = 1e-9
    e_lo = esize(lo)
    if e_lo is None:
        raise DivergenceError(
            f"evaluation fails even at x={lo}; malformed system?")
    if e_lo >= target_n:
        # Smallest objects already meet the target (e.g. a finite class
        # whose min size equals it); report the boundary.
        if abs(e_lo - target_n) <= eps_solver * target_n:
            return lo
        raise NoSolutionError(
            f"expected size is {e_lo:.6g} >= target {target_n} already "
            f"as x -> 0", best_x=lo, best_size=e_lo)

    hi = 0.5
    e_hi = esize(hi)
    while e_hi is not None and e_hi < target_n:
        lo, e_lo = hi, e_hi
        hi *= 2.0
        if hi > _HI_CAP:
            raise NoSolutionError(
                f"expected size bounded at {e_lo:.6g} < target "
                f"{target_n}", best_x=lo, best_size=e_lo)
        e_hi = esize(hi)

    best_x, best_e = lo, e_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        e_mid = esize(mid)
        if e_mid is None or e_mid >= target_n:
            hi = mid
            if e_mid is not None and \
                    abs(e_mid - target_n) < abs(best_e - target_n):
                best_x, best_e = mid, e_mid
        else:
            lo, e_lo = mid, e_mid
            if abs(e_mid - target_n) < abs(best_e - target_n):
                best_x, best_e = mid, e_mid
        if abs(best_e - target_n) <= eps_solver * target_n:
            return best_x
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    if abs(best_e - target_n) <= eps_solver * target_n:
        return best_x
    raise NoSolutionError(
        f"bisection stalled at x={best_x!r} with expected size "
        f"{best_e:.6g} (target {target_n})", best_x=best_x,
        best_size=best_e)


# ---------------------------------------------------------------------------
# Minimum part count per profile weight (min-plus dynamic program)
# ---------------------------------------------------------------------------

DP_WEIGHT_CAP = 4096


def _minplus_conv(a: list[float], b: list[float]) -> list[float]:
    cap = len(a) - 1
    out = [math.inf] * (cap + 1)
    for wa, pa in enumerate(a):
        if pa == math.inf:
            continue
        for wb in range(cap - wa + 1):
            pb = b[wb]
            if pb == math.inf:
                continue
            s = pa + pb
            if s < out[wa + wb]:
                out[wa + wb] = s
        # a is scanned fully; nothing else to do
    return out


def _closure(a: list[float]) -> list[float]:
    """Min parts over concatenations of zero or more elements of a.

    Requires a[0] = inf (no neutral elements contribute weight 0).
    """
    cap = len(a) - 1
    out = [math.inf] * (cap + 1)
    out[0] = 0.0
    for w in range(1, cap + 1):
        best = math.inf
        for w1 in range(1, w + 1):
            pa = a[w1]
            if pa == math.inf:
                continue
            rest = out[w - w1]
            if pa + rest < best:
                best = pa + rest
        out[w] = best
    return out


def _diag_spread(a: list[float]) -> list[float]:
    """Min over j >= 1 of the j-th diagonal: (w, p) -> (j*w, p)."""
    cap = len(a) - 1
    out = [math.inf] * (cap + 1)
    for j in range(1, cap + 1):
        for w in range(1, cap // j + 1):
            if a[w] < out[j * w]:
                out[j * w] = a[w]
    return out


@dataclass(eq=False)
class MinPartsTable:
    """Minimum part count per weight, for every node of a system."""

    flat: FlatSystem
    cap: int
    arrays: list[list[float]] = field(repr=False)

    def alpha_node(self, idx: int, weight: int) -> int:
        if not 1 <= weight <= self.cap:
            raise CapExceededError(
                f"weight {weight} outside 1..{self.cap}")
        p = self.arrays[idx][weight]
        if p == math.inf:
            raise NoProfileError(
                f"no profile of weight {weight} for this class")
        return int(p)

    def alpha(self, class_name: str, weight: int) -> int:
        return self.alpha_node(self.flat.node_for(class_name), weight)


def min_parts_table(system, cap: int) -> MinPartsTable:
    if cap < 1 or cap > DP_WEIGHT_CAP:
        raise CapExceededError(f"cap must be in 1..{DP_WEIGHT_CAP}")
    flat = _as_flat(system)
    n = flat.n_nodes
    inf = math.inf
    arrays: list[list[float]] = [[inf] * (cap + 1) for _ in range(n)]

    def compute(i: int) -> list[float]:
        op = flat.ops[i]
        if op == EPS:
            row = [inf] * (cap + 1)
            row[0] = 0.0
            return row
        if op == ATOM:
            row = [inf] * (cap + 1)
            if cap >= 1:
                row[1] = 1.0
            return row
        a = arrays[flat.left[i]]
        if op == UNION:
            b = arrays[flat.right[i]]
            return [min(x, y) for x, y in zip(a, b)]
        if op == PROD:
            return _minplus_conv(a, arrays[flat.right[i]])
        if op == SEQ:
            return _closure(a)
        if op == MSET:
            return _closure(_diag_spread(a))
        # CYC: a diagonal of a nonempty concatenation.
        plus = _minplus_conv(a, _closure(a))
        return _diag_spread(plus)

    for _ in range(2 * cap + 16):
        changed = False
        for i in range(n):
            row = compute(i)
            if row != arrays[i]:
                arrays[i] = row
                changed = True
        if not changed:
            break
    return MinPartsTable(flat, cap, arrays)


def min_parts(system, class_name: str, weight: int,
              cap: int | None = None) -> int:
    """Minimum of sum(n_i) over profiles with sum(i*n_i) = weight and a
    nonzero cycle-index coefficient; raises NoProfileError if none."""
    if weight < 1:
        raise InvalidParameterError("weight must be >= 1")
    table = min_parts_table(system, cap if cap is not None else weight)
    return table.alpha(class_name, weight)
