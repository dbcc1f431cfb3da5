"""Parser and static checks for combinatorial class specifications.

A specification is a sequence of class definitions in a small text
language:

    system := def+
    def    := IDENT "=" expr ";"
    expr   := term ("+" term)*
    term   := factor ("*" factor)*
    factor := "Z" | "Eps" | IDENT
            | ("Seq" | "MSet" | "Cyc") "(" expr ")"
            | "(" expr ")"

`#` starts a comment running to end of line.  `Z` is the atomic class,
`Eps` the neutral class; `+` is union and `*` product, both parsed
n-ary and stored right-nested.  Definitions may be recursive
(`T = Z * MSet(T);`) and may reference classes defined later in the
file.

The sequence, multiset and cycle builders are not defined over classes
admitting an object of size zero; `validate` reports any such use,
along with the well-foundedness of every definition (a class must
admit at least one object of finite size).  Both checks rest on
`min_size`, a least-fixed-point computation of the smallest object
size per class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DuplicateDefinitionError, SpecSyntaxError, UnknownNameError

__all__ = [
    "Epsilon", "Atom", "Union", "Product", "Seq", "MSet", "Cyc", "Ref",
    "ClassExpr", "SpecSystem", "ValidationReport", "ClassReport",
    "parse_spec", "validate", "min_size", "pretty", "pretty_system",
    "builtin_spec_names", "load_builtin",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Epsilon:
    """The neutral class: one object of size 0."""


@dataclass(frozen=True)
class Atom:
    """The atomic class: one object of size 1."""


@dataclass(frozen=True)
class Union:
    left: "ClassExpr"
    right: "ClassExpr"


@dataclass(frozen=True)
class Product:
    left: "ClassExpr"
    right: "ClassExpr"


@dataclass(frozen=True)
class Seq:
    inner: "ClassExpr"


@dataclass(frozen=True)
class MSet:
    inner: "ClassExpr"


@dataclass(frozen=True)
class Cyc:
    inner: "ClassExpr"


@dataclass(frozen=True)
class Ref:
    name: str


ClassExpr = Epsilon | Atom | Union | Product | Seq | MSet | Cyc | Ref

_BUILDERS = {"Seq": Seq, "MSet": MSet, "Cyc": Cyc}
_RESERVED = {"Z", "Eps", "Seq", "MSet", "Cyc"}


@dataclass
class SpecSystem:
    """An ordered set of named class definitions.

    ``root`` is the default class for commands that do not name one;
    parsing sets it to the first definition.
    """

    definitions: dict[str, ClassExpr]
    root: str

    def expr(self, name: str) -> ClassExpr:
        try:
            return self.definitions[name]
        except KeyError:
            raise UnknownNameError(f"no class named {name!r}") from None


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass
class _Token:
    kind: str           # IDENT, SYM, EOF
    value: str
    line: int
    col: int


def _lex(source: str) -> list[_Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and source[i] != "\n":
                i += 1
        elif ch in "=+*();":
            tokens.append(_Token("SYM", ch, line, col))
            i += 1
            col += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", source[i:j], line, col))
            col += j - i
            i = j
        else:
            raise SpecSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent over the grammar above)
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str) -> _Token:
        tok = self.next()
        if tok.kind != "SYM" or tok.value != sym:
            raise SpecSyntaxError(
                f"expected {sym!r}, found {tok.value or 'end of input'!r}",
                tok.line, tok.col)
        return tok

    def parse_system(self) -> SpecSystem:
        definitions: dict[str, ClassExpr] = {}
        while self.peek().kind != "EOF":
            name_tok = self.next()
            if name_tok.kind != "IDENT":
                raise SpecSyntaxError(
                    f"expected a class name, found {name_tok.value!r}",
                    name_tok.line, name_tok.col)
            name = name_tok.value
            if name in _RESERVED:
                raise SpecSyntaxError(
                    f"{name!r} is reserved and cannot be defined",
                    name_tok.line, name_tok.col)
            if name in definitions:
                raise DuplicateDefinitionError(
                    f"class {name!r} defined twice "
                    f"(second definition at line {name_tok.line})")
            self.expect_sym("=")
            expr = self.parse_expr()
            self.expect_sym(";")
            definitions[name] = expr
        if not definitions:
            tok = self.peek()
            raise SpecSyntaxError("empty specification", tok.line, tok.col)
        system = SpecSystem(definitions, root=next(iter(definitions)))
        _resolve_refs(system)
        return system

    def parse_expr(self) -> ClassExpr:
        terms = [self.parse_term()]
        while self.peek().kind == "SYM" and self.peek().value == "+":
            self.next()
            terms.append(self.parse_term())
        expr = terms[-1]
        for t in reversed(terms[:-1]):
            expr = Union(t, expr)
        return expr

    def parse_term(self) -> ClassExpr:
        factors = [self.parse_factor()]
        while self.peek().kind == "SYM" and self.peek().value == "*":
            self.next()
            factors.append(self.parse_factor())
        expr = factors[-1]
        for f in reversed(factors[:-1]):
            expr = Product(f, expr)
        return expr

    def parse_factor(self) -> ClassExpr:
        tok = self.next()
        if tok.kind == "SYM" and tok.value == "(":
            expr = self.parse_expr()
            self.expect_sym(")")
            return expr
        if tok.kind != "IDENT":
            raise SpecSyntaxError(
                f"expected a class expression, found "
                f"{tok.value or 'end of input'!r}", tok.line, tok.col)
        if tok.value == "Z":
            return Atom()
        if tok.value == "Eps":
            return Epsilon()
        if tok.value in _BUILDERS:
            self.expect_sym("(")
            inner = self.parse_expr()
            self.expect_sym(")")
            return _BUILDERS[tok.value](inner)
        return Ref(tok.value)


def _resolve_refs(system: SpecSystem) -> None:
    def walk(expr: ClassExpr) -> None:
        if isinstance(expr, Ref):
            if expr.name not in system.definitions:
                raise UnknownNameError(
                    f"reference to undefined class {expr.name!r}")
        elif isinstance(expr, (Union, Product)):
            walk(expr.left)
            walk(expr.right)
        elif isinstance(expr, (Seq, MSet, Cyc)):
            walk(expr.inner)

    for expr in system.definitions.values():
        walk(expr)


def parse_spec(source: str) -> SpecSystem:
    """Parse specification text into a system of class expressions.

    Raises SpecSyntaxError for malformed text (with line/column),
    UnknownNameError for unresolved references and
    DuplicateDefinitionError for repeated names.
    """
    return _Parser(_lex(source)).parse_system()


# ---------------------------------------------------------------------------
# Pretty printing (inverse of the parser, up to whitespace)
# ---------------------------------------------------------------------------

def pretty(expr: ClassExpr) -> str:
    """Render an expression in the concrete syntax."""
    # Precedence: union 0, product 1, factor 2; parenthesize when a
    # lower-precedence node sits under a higher-precedence context.
    def go(e: ClassExpr, prec: int) -> str:
        if isinstance(e, Epsilon):
            return "Eps"
        if isinstance(e, Atom):
            return "Z"
        if isinstance(e, Ref):
            return e.name
        if isinstance(e, Seq):
            return f"Seq({go(e.inner, 0)})"
        if isinstance(e, MSet):
            return f"MSet({go(e.inner, 0)})"
        if isinstance(e, Cyc):
            return f"Cyc({go(e.inner, 0)})"
        if isinstance(e, Union):
            s = f"{go(e.left, 1)} + {go(e.right, 0)}"
            return f"({s})" if prec > 0 else s
        if isinstance(e, Product):
            s = f"{go(e.left, 2)} * {go(e.right, 1)}"
            return f"({s})" if prec > 1 else s
        raise TypeError(f"not a class expression: {e!r}")

    return go(expr, 0)


def pretty_system(system: SpecSystem) -> str:
    return "".join(f"{name} = {pretty(expr)};\n"
                   for name, expr in system.definitions.items())


# ---------------------------------------------------------------------------
# Minimum object size (least fixed point) and validation
# ---------------------------------------------------------------------------

def _expr_min_size(expr: ClassExpr, sizes: dict[str, float]) -> float:
    if isinstance(expr, Epsilon):
        return 0
    if isinstance(expr, Atom):
        return 1
    if isinstance(expr, Ref):
        return sizes[expr.name]
    if isinstance(expr, Union):
        return min(_expr_min_size(expr.left, sizes),
                   _expr_min_size(expr.right, sizes))
    if isinstance(expr, Product):
        return _expr_min_size(expr.left, sizes) + \
            _expr_min_size(expr.right, sizes)
    if isinstance(expr, (Seq, MSet)):
        return 0          # the empty sequence / multiset
    if isinstance(expr, Cyc):
        return _expr_min_size(expr.inner, sizes)   # at least one element
    raise TypeError(f"not a class expression: {expr!r}")


def _min_sizes(system: SpecSystem) -> dict[str, float]:
    sizes = {name: math.inf for name in system.definitions}
    # Downward iteration from infinity: only productively derivable
    # finite sizes emerge, so empty recursions stay infinite.
    for _ in range(4 * sum(1 for _ in system.definitions) + 64):
        changed = False
        for name, expr in system.definitions.items():
            s = _expr_min_size(expr, sizes)
            if s != sizes[name]:
                sizes[name] = s
                changed = True
        if not changed:
            return sizes
    return sizes


def min_size(system: SpecSystem, class_name: str) -> float:
    """Size of the smallest object of the class; math.inf if empty."""
    if class_name not in system.definitions:
        raise UnknownNameError(f"no class named {class_name!r}")
    return _min_sizes(system)[class_name]


@dataclass
class ClassReport:
    name: str
    min_size: float
    admits_epsilon: bool
    well_founded: bool


@dataclass
class ValidationReport:
    classes: dict[str, ClassReport]
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(system: SpecSystem) -> ValidationReport:
    """Check well-foundedness and builder preconditions.

    Diagnostics are returned in the report rather than raised; callers
    treat a non-empty error list as fatal.
    """
    sizes = _min_sizes(system)
    report = ValidationReport(classes={
        name: ClassReport(name, s, admits_epsilon=(s == 0),
                          well_founded=math.isfinite(s))
        for name, s in sizes.items()
    })

    def check_builders(owner: str, expr: ClassExpr) -> None:
        if isinstance(expr, (Union, Product)):
            check_builders(owner, expr.left)
            check_builders(owner, expr.right)
        elif isinstance(expr, (Seq, MSet, Cyc)):
            if _expr_min_size(expr.inner, sizes) == 0:
                report.errors.append(
                    f"in class {owner}: {type(expr).__name__} over class "
                    f"with neutral object")
            check_builders(owner, expr.inner)

    for name, s in sizes.items():
        if not math.isfinite(s):
            report.errors.append(f"class {name}: not well-founded")
    for name, expr in system.definitions.items():
        check_builders(name, expr)
    return report


# ---------------------------------------------------------------------------
# Bundled specifications
# ---------------------------------------------------------------------------

def builtin_spec_names() -> list[str]:
    from importlib import resources
    files = resources.files("chromaboltz").joinpath("specs")
    return sorted(p.name[:-5] for p in files.iterdir()
                  if p.name.endswith(".spec"))


def load_builtin(name: str) -> str:
    """Return the source text of a bundled specification."""
    from importlib import resources
    path = resources.files("chromaboltz").joinpath(f"specs/{name}.spec")
    try:
        return path.read_text()
    except FileNotFoundError:
        raise UnknownNameError(
            f"no bundled spec named {name!r}; "
            f"available: {', '.join(builtin_spec_names())}") from None
