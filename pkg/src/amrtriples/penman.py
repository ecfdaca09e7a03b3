"""Penman notation reader and writer.

Two surface forms are produced. :func:`serialize_penman` gives the one-line,
space-tokenized linearization used as a seq2seq target::

    ( p / person :ARG0-of ( b / betray-01 ) )

and :func:`format_penman` the indented layout of AMR release files. The
reader accepts either, plus the variable-free form written with
``keep_variables=False``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .graph import (
    AmrGraph,
    Branch,
    Constant,
    SurfaceNode,
    Triple,
    VariableNamer,
    require_valid,
    surface_tree,
    validate,
)

__all__ = [
    "PenmanConfig",
    "PenmanError",
    "parse_penman",
    "serialize_penman",
    "format_penman",
    "render_penman",
    "tokenize",
]

# bare tokens shaped like this are variable references and must be declared
VARIABLE_SHAPE = re.compile(r"^[a-z]\d*$")

_TOKEN = re.compile(r'\s*(?:(?P<punct>[()/])|(?P<str>"[^"]*")|(?P<role>:[^\s()"]*)|(?P<atom>[^\s()/"]+)|(?P<bad>"))')


class PenmanError(ValueError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        where = f" at token {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class PenmanConfig:
    """Options for Penman output.

    There is deliberately no inverse-role switch: a Penman tree cannot
    express re-entrancy without ``-of`` roles.
    """

    keep_variables: bool = True


def tokenize(text: str) -> list[tuple[str, str]]:
    """Split Penman text into ``(kind, value)`` pairs.

    Kinds are ``punct``, ``str`` (value without quotes), ``role`` (without
    the colon) and ``atom``. Quoted strings may be written compactly
    (``"China"``) or with standalone quote tokens (``" China "``).
    """
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup == "bad":
            raise PenmanError("unterminated string literal", len(out))
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "str":
            value = " ".join(value[1:-1].split())
        elif kind == "role":
            value = value[1:]
            if not value:
                raise PenmanError("empty role", len(out))
        out.append((kind, value))
        pos = m.end()
    return out


@dataclass
class _Node:
    var: Optional[str]
    concept: str
    relations: list  # [(role, _Node | ("str"|"atom", value))]


class _Reader:
    def __init__(self, tokens, keep_variables):
        self.tokens = tokens
        self.i = 0
        self.keep_variables = keep_variables

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise PenmanError("unbalanced parentheses: unexpected end of input", self.i)
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise PenmanError(f"expected {want!r}, found {tok[1]!r}", self.i)
        self.i += 1
        return tok

    def node(self) -> _Node:
        self.take("punct", "(")
        var = None
        if self.keep_variables:
            var = self.take("atom")[1]
            self.take("punct", "/")
        kind, concept = self.take()
        if kind != "atom":
            raise PenmanError(f"expected a concept, found {concept!r}", self.i - 1)
        relations = []
        while True:
            kind, value = self.peek()
            if kind == "punct" and value == ")":
                self.i += 1
                return _Node(var, concept, relations)
            if kind != "role":
                if kind is None:
                    raise PenmanError("unbalanced parentheses: missing ')'", self.i)
                raise PenmanError(f"expected a role or ')', found {value!r}", self.i)
            self.i += 1
            nk, nv = self.peek()
            if nk == "punct" and nv == "(":
                relations.append((value, self.node()))
            elif nk in ("atom", "str"):
                self.i += 1
                relations.append((value, (nk, nv)))
            elif nk is None:
                raise PenmanError("unbalanced parentheses: missing ')'", self.i)
            else:
                raise PenmanError(f"role :{value} has no target", self.i)


def _read_tree(text: str, keep_variables: bool) -> _Node:
    tokens = tokenize(text)
    if not tokens:
        raise PenmanError("empty input")
    reader = _Reader(tokens, keep_variables)
    root = reader.node()
    if reader.i != len(tokens):
        if tokens[reader.i] == ("punct", ")"):
            raise PenmanError("unbalanced parentheses: extra ')'", reader.i)
        raise PenmanError("trailing tokens after graph", reader.i)
    return root


def _nodes(root: _Node) -> Iterator[_Node]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(c for _, c in reversed(node.relations) if isinstance(c, _Node))


def parse_penman(text: str, keep_variables: bool = True) -> AmrGraph:
    """Parse one Penman expression into an :class:`AmrGraph`.

    Edges keep textual order. Bare references may point forward to a
    variable declared later. With ``keep_variables=False`` the input is
    variable-free Penman: each bracketed node gets a fresh variable and a
    bare token equal to a bracketed concept refers back to the first node
    carrying that concept.
    """
    root = _read_tree(text, keep_variables)
    nodes = list(_nodes(root))
    namer = VariableNamer()
    instances: dict[str, str] = {}
    by_concept: dict[str, str] = {}
    for node in nodes:
        if keep_variables:
            if node.var in instances:
                raise PenmanError(f"duplicate instance declaration for {node.var}")
        else:
            node.var = namer(node.concept)
            by_concept.setdefault(node.concept, node.var)
        instances[node.var] = node.concept

    def target(kind, value):
        if kind == "str":
            return Constant.string(value)
        if keep_variables:
            if value in instances:
                return value
            if VARIABLE_SHAPE.match(value):
                raise PenmanError(f"reference to undeclared variable {value!r}")
        elif value in by_concept:
            return by_concept[value]
        return Constant.from_token(value)

    edges = []
    stack = [(root, iter(root.relations))]
    while stack:
        node, rest = stack[-1]
        item = next(rest, None)
        if item is None:
            stack.pop()
            continue
        role, child = item
        if isinstance(child, _Node):
            edges.append(Triple(node.var, role, child.var))
            stack.append((child, iter(child.relations)))
        else:
            edges.append(Triple(node.var, role, target(*child)))
    try:
        graph = AmrGraph(root.var, instances, tuple(edges))
    except ValueError as exc:  # constant validation
        raise PenmanError(str(exc)) from exc
    problems = validate(graph)
    if problems:
        raise PenmanError("; ".join(problems))
    return graph


# -- writing ------------------------------------------------------------------


@dataclass
class Rendered:
    """Token sequence plus, for each branch in textual order, the positions of
    the parent's head token and the child's head token."""

    tokens: list[str]
    anchors: list[tuple[Branch, int, int]]


def _head(graph: AmrGraph, var: str, keep_variables: bool) -> str:
    return var if keep_variables else graph.instances[var]


def render_penman(graph: AmrGraph, config: PenmanConfig = PenmanConfig()) -> Rendered:
    require_valid(graph)
    tree = surface_tree(graph)
    keep = config.keep_variables
    tokens: list[str] = []
    anchors: list[tuple[Branch, int, int]] = []

    def emit(node: SurfaceNode):
        tokens.append("(")
        head = len(tokens)
        if keep:
            tokens.extend((node.var, "/", graph.instances[node.var]))
        else:
            tokens.append(graph.instances[node.var])
        for b in node.branches:
            tokens.append(":" + b.role)
            anchors.append((b, head, len(tokens) + (1 if isinstance(b.child, SurfaceNode) else 0)))
            if isinstance(b.child, SurfaceNode):
                emit(b.child)
            elif isinstance(b.child, Constant):
                tokens.extend(b.child.tokens())
            else:
                tokens.append(_head(graph, b.child, keep))
        tokens.append(")")

    emit(tree)
    return Rendered(tokens, anchors)


def serialize_penman(graph: AmrGraph, config: PenmanConfig = PenmanConfig()) -> str:
    """One-line Penman with every token separated by a single space."""
    return " ".join(render_penman(graph, config).tokens)


def format_penman(graph: AmrGraph, indent: int = 4) -> str:
    """Indented Penman in the layout of AMR corpus files."""
    require_valid(graph)

    def emit(node: SurfaceNode, depth: int) -> str:
        parts = [f"({node.var} / {graph.instances[node.var]}"]
        for b in node.branches:
            if isinstance(b.child, SurfaceNode):
                value = emit(b.child, depth + 1)
            elif isinstance(b.child, Constant) and b.child.kind == "string":
                value = f'"{b.child.value}"'
            else:
                value = str(b.child)
            parts.append("\n" + " " * (indent * (depth + 1)) + f":{b.role} {value}")
        return "".join(parts) + ")"

    return emit(surface_tree(graph), 0)
