"""Flattened class systems.

The AST from `dsl` is compiled into parallel arrays of nodes with
references resolved to node indices, giving the evaluator, the
samplers and the profile dynamic program a shared cheap dispatch form.
Every distinct subexpression gets one node; a Ref collapses onto the
root node of the definition it names, so recursion becomes sharing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import dsl
from .errors import InvalidParameterError

EPS, ATOM, UNION, PROD, SEQ, MSET, CYC = range(7)

OP_NAMES = ["Eps", "Atom", "Union", "Product", "Seq", "MSet", "Cyc"]


@dataclass
class FlatSystem:
    system: dsl.SpecSystem
    ops: list[int]
    left: list[int]             # child index or -1
    right: list[int]            # second child index or -1
    class_node: dict[str, int]  # class name -> root node index
    node_of_expr: dict[int, int]  # id(ast node) -> node index
    min_sizes: list[float]      # per node, math.inf if empty

    @property
    def n_nodes(self) -> int:
        return len(self.ops)

    def node_for(self, ref) -> int:
        """Node index for a class name or an expression of the system."""
        if isinstance(ref, str):
            if ref not in self.class_node:
                self.system.expr(ref)   # raises UnknownNameError
            return self.class_node[ref]
        try:
            return self.node_of_expr[id(ref)]
        except KeyError:
            raise KeyError(
                "expression does not belong to this system; sample by "
                "class name or use a subexpression of it") from None

    def describe(self, idx: int) -> str:
        return OP_NAMES[self.ops[idx]]


def flatten(system: dsl.SpecSystem) -> FlatSystem:
    ops: list[int] = []
    left: list[int] = []
    right: list[int] = []
    node_of_expr: dict[int, int] = {}
    ref_names: list[str] = []   # slot -> referenced class name

    def emit(op: int, a: int = -1, b: int = -1) -> int:
        ops.append(op)
        left.append(a)
        right.append(b)
        return len(ops) - 1

    def build(expr: dsl.ClassExpr) -> int:
        # A Ref emits no node of its own: the encoded slot is patched
        # to the root node of the named definition below.
        if isinstance(expr, dsl.Ref):
            ref_names.append(expr.name)
            return -2 - (len(ref_names) - 1)
        if isinstance(expr, dsl.Epsilon):
            idx = emit(EPS)
        elif isinstance(expr, dsl.Atom):
            idx = emit(ATOM)
        elif isinstance(expr, dsl.Union):
            idx = emit(UNION, build(expr.left), build(expr.right))
        elif isinstance(expr, dsl.Product):
            idx = emit(PROD, build(expr.left), build(expr.right))
        elif isinstance(expr, dsl.Seq):
            idx = emit(SEQ, build(expr.inner))
        elif isinstance(expr, dsl.MSet):
            idx = emit(MSET, build(expr.inner))
        elif isinstance(expr, dsl.Cyc):
            idx = emit(CYC, build(expr.inner))
        else:
            raise TypeError(f"not a class expression: {expr!r}")
        node_of_expr[id(expr)] = idx
        return idx

    class_node = {name: build(expr)
                  for name, expr in system.definitions.items()}

    def resolve(code: int) -> int:
        # Follow alias chains ("A = B;"); cycles of bare aliases define
        # nothing and are rejected.
        seen: set[str] = set()
        while code < -1:
            name = ref_names[-2 - code]
            if name in seen:
                raise InvalidParameterError(
                    f"alias cycle through class {name!r}")
            seen.add(name)
            code = class_node[name]
        return code

    for name in list(class_node):
        class_node[name] = resolve(class_node[name])
    for i in range(len(ops)):
        left[i] = resolve(left[i])
        right[i] = resolve(right[i])

    # Map Ref AST nodes onto their targets so sampling a subexpression
    # that is a plain reference still works.
    def map_refs(expr: dsl.ClassExpr) -> None:
        if isinstance(expr, dsl.Ref):
            node_of_expr[id(expr)] = class_node[expr.name]
        elif isinstance(expr, (dsl.Union, dsl.Product)):
            map_refs(expr.left)
            map_refs(expr.right)
        elif isinstance(expr, (dsl.Seq, dsl.MSet, dsl.Cyc)):
            map_refs(expr.inner)

    for expr in system.definitions.values():
        map_refs(expr)

    flat = FlatSystem(system, ops, left, right, class_node, node_of_expr,
                      min_sizes=[])
    flat.min_sizes = _node_min_sizes(flat)
    return flat


def _node_min_sizes(flat: FlatSystem) -> list[float]:
    n = flat.n_nodes
    sizes: list[float] = [math.inf] * n
    for _ in range(4 * n + 64):
        changed = False
        for i in range(n):
            op = flat.ops[i]
            if op == EPS:
                s = 0
            elif op == ATOM:
                s = 1
            elif op == UNION:
                s = min(sizes[flat.left[i]], sizes[flat.right[i]])
            elif op == PROD:
                s = sizes[flat.left[i]] + sizes[flat.right[i]]
            elif op in (SEQ, MSET):
                s = 0
            else:   # CYC
                s = sizes[flat.left[i]]
            if s != sizes[i]:
                sizes[i] = s
                changed = True
        if not changed:
            break
    return sizes
