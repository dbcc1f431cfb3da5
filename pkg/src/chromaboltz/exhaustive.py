"""Brute-force ground truth: exhaustive small-size enumeration.

Canonical t-colored objects are generated size by size straight from
the grammar (objects of size n are assembled from strictly smaller
pieces, except atoms), deduplicating multisets by building children in
nondecreasing canonical order and cycles by minimal-rotation
canonicalization.  This is a completely independent code path from the
series oracle, which is the point: the two must agree coefficientwise.

Capped at small sizes by design; this is a test oracle, not a counter.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dsl
from ._flat import ATOM, CYC, EPS, MSET, PROD, SEQ, UNION, FlatSystem, flatten
from .errors import CapExceededError, InvalidParameterError
from .objects import AtomNode, CycNode, MSetNode, TupleNode, canonicalize, encode
from .oracle import eval_f

__all__ = ["EnumTable", "enumerate_colored", "boltzmann_pmf", "ENUM_SIZE_CAP"]

ENUM_SIZE_CAP = 8


@dataclass(eq=False)
class EnumTable:
    """Canonical t-colored objects of one class, by size up to n_cap."""

    system: dsl.SpecSystem
    class_name: str
    t: int
    n_cap: int
    per_size: dict[int, tuple]

    def count(self, n: int) -> int:
        return len(self.per_size[n])

    def objects(self, n: int) -> tuple:
        return self.per_size[n]

    def counts(self) -> list[int]:
        return [self.count(n) for n in range(self.n_cap + 1)]

    def all_objects(self):
        for n in range(self.n_cap + 1):
            yield from self.per_size[n]


def enumerate_colored(system, class_name: str, t: int, n_cap: int,
                      cap: int = ENUM_SIZE_CAP) -> EnumTable:
    """Complete duplicate-free lists of canonical objects per size."""
    if n_cap > cap:
        raise CapExceededError(f"n_cap {n_cap} exceeds cap {cap}")
    if t < 1:
        raise InvalidParameterError("need at least one color")
    flat = system if isinstance(system, FlatSystem) else flatten(system)
    root = flat.node_for(class_name)

    memo: dict[tuple, tuple] = {}
    in_progress: set[tuple] = set()

    def objects(idx: int, n: int) -> tuple:
        key = (idx, n)
        got = memo.get(key)
        if got is not None:
            return got
        if key in in_progress:
            raise InvalidParameterError(
                "enumeration recursed without consuming size; "
                "is the system well-founded?")
        in_progress.add(key)
        try:
            out = _build(idx, n)
        finally:
            in_progress.discard(key)
        memo[key] = out
        return out

    def seqs(idx: int, n: int) -> tuple:
        """Tuples of elements of class idx with sizes summing to n."""
        key = (idx, n, "seq")
        got = memo.get(key)
        if got is not None:
            return got
        if n == 0:
            out = (TupleNode(()),)
        else:
            acc = []
            for m in range(1, n + 1):
                heads = objects(idx, m)
                if not heads:
                    continue
                for rest in seqs(idx, n - m):
                    for h in heads:
                        acc.append(TupleNode((h,) + rest.children))
            out = tuple(acc)
        memo[key] = out
        return out

    def _build(idx: int, n: int) -> tuple:
        op = flat.ops[idx]
        if op == EPS:
            return (TupleNode(()),) if n == 0 else ()
        if op == ATOM:
            return tuple(AtomNode(c) for c in range(1, t + 1)) \
                if n == 1 else ()
        if op == UNION:
            seen = {}
            for o in objects(flat.left[idx], n):
                seen.setdefault(encode(o), o)
            for o in objects(flat.right[idx], n):
                seen.setdefault(encode(o), o)
            return tuple(v for _, v in sorted(seen.items()))
        if op == PROD:
            a, b = flat.left[idx], flat.right[idx]
            acc = []
            for m in range(n + 1):
                lefts = objects(a, m)
                if not lefts:
                    continue
                rights = objects(b, n - m)
                for lo in lefts:
                    for ro in rights:
                        acc.append(TupleNode((lo, ro)))
            return tuple(acc)
        if op == SEQ:
            return seqs(flat.left[idx], n)
        if op == MSET:
            return _msets(flat.left[idx], n)
        if op == CYC:
            return _cycs(flat.left[idx], n)
        raise AssertionError(f"bad op {op}")

    def _msets(inner: int, n: int) -> tuple:
        if n == 0:
            return (MSetNode(()),)
        universe = []
        for m in range(1, n + 1):
            universe.extend((encode(o), m, o) for o in objects(inner, m))
        universe.sort(key=lambda e: e[0])
        acc = []

        def choose(start: int, remaining: int, chosen: list) -> None:
            if remaining == 0:
                acc.append(MSetNode(list(chosen)))
                return
            for i in range(start, len(universe)):
                _, m, o = universe[i]
                if m <= remaining:
                    chosen.append(o)
                    choose(i, remaining - m, chosen)
                    chosen.pop()

        choose(0, n, [])
        return tuple(acc)

    def _cycs(inner: int, n: int) -> tuple:
        seen = {}
        for word in seqs(inner, n):
            if not word.children:
                continue
            c = canonicalize(CycNode(word.children))
            seen.setdefault(encode(c), c)
        return tuple(v for _, v in sorted(seen.items()))

    per_size = {}
    for n in range(n_cap + 1):
        objs = [(encode(o), o) for o in objects(root, n)]
        objs.sort(key=lambda e: e[0])
        per_size[n] = tuple(o for _, o in objs)
    return EnumTable(flat.system, class_name, t, n_cap, per_size)


def boltzmann_pmf(table: EnumTable, x: float, tau: float = 1e-12):
    """Exact Boltzmann probabilities x^|a| / f(x, t) per object.

    Returns (pmf, tail_mass): the mapping over the enumerated objects
    and the residual mass of all sizes above the enumeration cap.
    """
    f = eval_f(table.system, table.class_name, x, float(table.t), tau=tau)
    pmf = {}
    covered = 0.0
    for n in range(table.n_cap + 1):
        p = x ** n / f
        for obj in table.per_size[n]:
            pmf[obj] = p
            covered += p
    return pmf, max(0.0, 1.0 - covered)
