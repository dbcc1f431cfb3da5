"""Profiled and colored combinatorial objects.

A profiled object is a tree over five node kinds.  Diagonal nodes
``DiagNode(k, child)`` stand for k structurally identical copies of the
child whose corresponding atoms are fused into common partition parts;
they are kept unexpanded in the stored form (storage is linear in the
compressed size) and expanded lazily by `expand`.

A colored object is the same tree shape with every diagonal expanded
and every atom carrying a color in {1..t}.  Colored objects compare up
to permutation of multiset children and rotation of cycle children;
`canonicalize` picks the representative with multiset children sorted
and cycle children at their lexicographically minimal rotation, so two
colored objects are equivalent iff their canonical encodings are equal.

Sampler conventions for diagonal placement:
  * a multiset child ``DiagNode(j, a)`` contributes j fused copies of
    the single element ``a``;
  * a cycle holds either its element list directly (no symmetry) or a
    single ``DiagNode(k, TupleNode(segment))`` whose tuple is the
    repeated segment, i.e. the cycle reads segment^k with copies fused.
Expansion understands nested diagonals (cardinals multiply) in any
position.

Text form: ``()`` sequences/tuples, ``{}`` multisets, ``[]`` cycles,
``*`` an uncolored atom, ``#c`` an atom colored c, ``@k<child>`` a
diagonal.
"""

from __future__ import annotations

import json

__all__ = [
    "AtomNode", "TupleNode", "MSetNode", "CycNode", "DiagNode",
    "ProfiledObject", "ColoredObject",
    "size", "profile", "profile_weight", "profile_parts",
    "expand", "merge_copies", "canonicalize", "encode",
    "to_text", "to_json_dict", "from_json_dict", "iter_atoms",
]


class _Node:
    __slots__ = ("size",)

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))


class AtomNode(_Node):
    """A single atom, optionally colored (color None = uncolored)."""

    __slots__ = ("color",)

    def __init__(self, color: int | None = None):
        self.size = 1
        self.color = color

    def _key(self):
        return self.color

    def __repr__(self):
        return f"AtomNode({self.color})" if self.color is not None \
            else "AtomNode()"


class TupleNode(_Node):
    """An ordered run of children: products and sequences."""

    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)
        self.size = sum(c.size for c in self.children)

    def _key(self):
        return self.children

    def __repr__(self):
        return f"TupleNode({list(self.children)!r})"


class MSetNode(_Node):
    """An unordered collection of children."""

    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)
        self.size = sum(c.size for c in self.children)

    def _key(self):
        return self.children

    def __repr__(self):
        return f"MSetNode({list(self.children)!r})"


class CycNode(_Node):
    """A cyclic arrangement of children."""

    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)
        if not self.children:
            raise ValueError("a cycle has at least one element")
        self.size = sum(c.size for c in self.children)

    def _key(self):
        return self.children

    def __repr__(self):
        return f"CycNode({list(self.children)!r})"


class DiagNode(_Node):
    """k fused copies of the child (k >= 1; k = 1 is transparent)."""

    __slots__ = ("k", "child")

    def __init__(self, k: int, child):
        if k < 1:
            raise ValueError("diagonal index must be positive")
        self.k = k
        self.child = child
        self.size = k * child.size

    def _key(self):
        return (self.k, self.child)

    def __repr__(self):
        return f"DiagNode({self.k}, {self.child!r})"


ProfiledObject = _Node
ColoredObject = _Node     # expanded shape, atoms colored


# ---------------------------------------------------------------------------
# Size and profile
# ---------------------------------------------------------------------------

def size(obj: ProfiledObject) -> int:
    """Number of atoms once all diagonals are expanded."""
    return obj.size


def profile(obj: ProfiledObject) -> dict[int, int]:
    """Part-cardinal counts: maps i to the number of parts of cardinal i.

    Each atom contributes one part whose cardinal is the product of the
    k's of the diagonal nodes on its root path.
    """
    counts: dict[int, int] = {}

    def walk(node, mult):
        if isinstance(node, AtomNode):
            counts[mult] = counts.get(mult, 0) + 1
        elif isinstance(node, DiagNode):
            walk(node.child, mult * node.k)
        else:
            for c in node.children:
                walk(c, mult)

    walk(obj, 1)
    return counts


def profile_weight(counts: dict[int, int]) -> int:
    return sum(i * n for i, n in counts.items())


def profile_parts(counts: dict[int, int]) -> int:
    return sum(counts.values())


# ---------------------------------------------------------------------------
# Expansion to an explicit shape plus set-partition
# ---------------------------------------------------------------------------

def merge_copies(parts: list[list[int]], k: int, span: int) -> list[list[int]]:
    """Partition of k fused copies of a block of `span` atoms.

    Part P becomes the union of P shifted by j*span for j < k; this is
    the diagonal rule on explicit set-partitions.
    """
    return [[a + j * span for j in range(k) for a in p] for p in parts]


def _expand_elements(node, parent_kind):
    """Elements a node contributes inside a collection.

    Returns (list of expanded element trees, atom count, parts with
    atom indices local to this block).  A DiagNode splices k fused
    copies of its child's elements; directly under a cycle, a diagonal
    over a tuple repeats the tuple's members as the cycle segment.
    """
    if isinstance(node, DiagNode):
        inner = node.child
        if isinstance(inner, DiagNode):
            elems, span, parts = _expand_elements(inner, parent_kind)
        elif parent_kind is CycNode and isinstance(inner, TupleNode):
            elems, parts, span = [], [], 0
            for member in inner.children:
                tree, n, p = _expand_one(member)
                elems.append(tree)
                parts.extend([a + span for a in q] for q in p)
                span += n
        else:
            tree, span, parts = _expand_one(inner)
            elems = [tree]
        return elems * node.k, node.k * span, \
            merge_copies(parts, node.k, span)
    tree, n, parts = _expand_one(node)
    return [tree], n, parts


def _expand_one(node):
    """Expand a node in object position: (tree, atom count, parts)."""
    if isinstance(node, AtomNode):
        return AtomNode(node.color), 1, [[0]]
    if isinstance(node, DiagNode):
        # A top-level diagonal reads as the concatenation of its copies.
        elems, n, parts = _expand_elements(node, TupleNode)
        return TupleNode(elems), n, parts
    kind = type(node)
    children, parts, offset = [], [], 0
    for c in node.children:
        elems, n, p = _expand_elements(c, kind)
        children.extend(elems)
        parts.extend([a + offset for a in q] for q in p)
        offset += n
    return kind(children), offset, parts


def expand(obj: ProfiledObject):
    """Expand diagonals into explicit copies with fused atoms.

    Returns (tree, parts): the diagonal-free tree and the set-partition
    of its atoms as lists of atom indices in preorder.  The partition's
    cardinal counts equal profile(obj).
    """
    tree, n, parts = _expand_one(obj)
    assert n == obj.size
    return tree, parts


def iter_atoms(obj):
    """Yield the AtomNode leaves of a diagonal-free tree in preorder."""
    if isinstance(obj, AtomNode):
        yield obj
    elif isinstance(obj, DiagNode):
        raise ValueError("tree still contains diagonals")
    else:
        for c in obj.children:
            yield from iter_atoms(c)


# ---------------------------------------------------------------------------
# Canonical form for colored objects
# ---------------------------------------------------------------------------

_TAG = {AtomNode: 0, TupleNode: 1, MSetNode: 2, CycNode: 3}


def _canon(node):
    """Return (canonical node, sort key).

    Keys order by (size, node tag, payload); payloads only ever meet
    payloads of the same node kind, so comparisons stay well typed.
    """
    if isinstance(node, AtomNode):
        return node, (1, 0, node.color if node.color is not None else 0)
    if isinstance(node, DiagNode):
        raise ValueError("canonical form is defined on expanded objects; "
                         "call expand() or color first")
    pairs = [_canon(c) for c in node.children]
    if isinstance(node, TupleNode):
        key = (node.size, 1, tuple(k for _, k in pairs))
        return TupleNode([c for c, _ in pairs]), key
    if isinstance(node, MSetNode):
        pairs.sort(key=lambda p: p[1])
        key = (node.size, 2, tuple(k for _, k in pairs))
        return MSetNode([c for c, _ in pairs]), key
    # cycle: lexicographically minimal rotation of the key sequence
    keys = [k for _, k in pairs]
    m = len(keys)
    best = min(range(m), key=lambda r: [keys[(r + i) % m] for i in range(m)])
    rot = [pairs[(best + i) % m] for i in range(m)]
    key = (node.size, 3, tuple(k for _, k in rot))
    return CycNode([c for c, _ in rot]), key


def canonicalize(obj: ColoredObject) -> ColoredObject:
    """Canonical representative of the equivalence class of `obj`.

    Idempotent; two colored objects are equivalent (multiset children
    up to permutation, cycle children up to rotation) iff their
    canonical forms are equal.
    """
    node, _ = _canon(obj)
    return node


def encode(obj: ColoredObject):
    """Hashable canonical key; equal keys iff equivalent objects."""
    _, key = _canon(obj)
    return key


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_text(obj) -> str:
    if isinstance(obj, AtomNode):
        return "*" if obj.color is None else f"#{obj.color}"
    if isinstance(obj, DiagNode):
        return f"@{obj.k}{to_text(obj.child)}"
    brackets = {TupleNode: "()", MSetNode: "{}", CycNode: "[]"}[type(obj)]
    inner = "".join(to_text(c) for c in obj.children)
    return brackets[0] + inner + brackets[1]


def to_json_dict(obj) -> dict:
    if isinstance(obj, AtomNode):
        d = {"kind": "atom"}
        if obj.color is not None:
            d["color"] = obj.color
        return d
    if isinstance(obj, DiagNode):
        return {"kind": "diag", "k": obj.k, "child": to_json_dict(obj.child)}
    kind = {TupleNode: "tuple", MSetNode: "mset", CycNode: "cyc"}[type(obj)]
    return {"kind": kind, "children": [to_json_dict(c) for c in obj.children]}


def from_json_dict(d: dict):
    kind = d["kind"]
    if kind == "atom":
        return AtomNode(d.get("color"))
    if kind == "diag":
        return DiagNode(d["k"], from_json_dict(d["child"]))
    ctor = {"tuple": TupleNode, "mset": MSetNode, "cyc": CycNode}[kind]
    return ctor([from_json_dict(c) for c in d["children"]])


def to_json(obj) -> str:
    return json.dumps(to_json_dict(obj), sort_keys=True,
                      separators=(",", ":"))
