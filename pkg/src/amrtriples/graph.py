"""In-memory AMR graph model, role algebra and structural measures.

An :class:`AmrGraph` is a rooted, directed, edge-labelled graph. Nodes are
variables bound to concepts through ``instances``; ``edges`` is an ordered
tuple of :class:`Triple` whose sources are always variables and whose targets
are variables or :class:`Constant` values. Edge order is significant: every
serializer in the package walks edges in stored order, so equal graphs give
byte-identical output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

__all__ = [
    "NON_INVERSE_OF",
    "Constant",
    "Term",
    "Triple",
    "AmrGraph",
    "SurfaceNode",
    "Branch",
    "GraphError",
    "is_inverse_role",
    "invert_role",
    "normalize_inverse_roles",
    "surface_tree",
    "canonical_order",
    "graph_depth",
    "validate",
    "VariableNamer",
]

#: Roles that end in ``-of`` but are forward roles in the AMR inventory.
NON_INVERSE_OF = frozenset({"consist-of", "prep-out-of", "prep-on-behalf-of"})

_FORBIDDEN = re.compile(r'[\s/():|"]')
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class GraphError(ValueError):
    """Raised when an operation receives a structurally invalid graph."""


@dataclass(frozen=True)
class Constant:
    """A non-node edge target: quoted string, number or bare symbol."""

    value: str
    kind: str = "symbol"

    KINDS = ("string", "number", "symbol")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown constant kind {self.kind!r}")
        if self.kind == "string":
            if '"' in self.value:
                raise ValueError("string constants may not contain '\"'")
            # whitespace inside a literal collapses to single spaces on output
            object.__setattr__(self, "value", " ".join(self.value.split()))
        elif not self.value or _FORBIDDEN.search(self.value):
            raise ValueError(f"invalid {self.kind} constant {self.value!r}")

    @classmethod
    def from_token(cls, token: str) -> "Constant":
        """Classify a bare (unquoted) token as a number or a symbol."""
        if _NUMBER.match(token):
            return cls(token, "number")
        return cls(token, "symbol")

    @classmethod
    def string(cls, value: str) -> "Constant":
        return cls(value, "string")

    def tokens(self) -> list[str]:
        if self.kind == "string":
            return ['"', *self.value.split(), '"']
        return [self.value]

    def __str__(self):
        return " ".join(self.tokens())


#: A triple term. Plain strings are variables (or concept labels in
#: variable-free linearizations); constants are always :class:`Constant`.
Term = Union[str, Constant]


@dataclass(frozen=True)
class Triple:
    source: Term
    role: str
    target: Term

    def tokens(self) -> list[str]:
        out = [str(self.source), self.role]
        if isinstance(self.target, Constant):
            out.extend(self.target.tokens())
        else:
            out.append(self.target)
        return out

    def __iter__(self):
        return iter((self.source, self.role, self.target))


@dataclass(frozen=True)
class AmrGraph:
    """A rooted AMR graph.

    ``instances`` is treated as read-only; its insertion order is the
    declaration order of the variables and guides where the Penman
    serializer expands each node.
    """

    top: str
    instances: dict[str, str]
    edges: tuple[Triple, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "instances", dict(self.instances))
        object.__setattr__(
            self, "edges", tuple(e if isinstance(e, Triple) else Triple(*e) for e in self.edges)
        )

    @property
    def variables(self) -> list[str]:
        return list(self.instances)

    def is_variable(self, term: Term) -> bool:
        return isinstance(term, str) and term in self.instances

    def concept(self, var: str) -> str:
        return self.instances[var]

    def replace(self, **changes) -> "AmrGraph":
        fields = {"top": self.top, "instances": self.instances, "edges": self.edges}
        fields.update(changes)
        return AmrGraph(**fields)

    def rename(self, mapping: dict[str, str]) -> "AmrGraph":
        """Return a copy with variables renamed through ``mapping``."""

        def sub(term):
            return mapping.get(term, term) if isinstance(term, str) else term

        return AmrGraph(
            top=sub(self.top),
            instances={sub(v): c for v, c in self.instances.items()},
            edges=tuple(Triple(sub(e.source), e.role, sub(e.target)) for e in self.edges),
        )


def is_inverse_role(role: str, exempt: Iterable[str] = NON_INVERSE_OF) -> bool:
    return role.endswith("-of") and role not in exempt


def invert_role(role: str, exempt: Iterable[str] = NON_INVERSE_OF) -> str:
    if role == "instance":
        raise ValueError("the instance role cannot be inverted")
    if is_inverse_role(role, exempt):
        return role[:-3]
    return role + "-of"


def normalize_inverse_roles(graph: AmrGraph, exempt: Iterable[str] = NON_INVERSE_OF) -> AmrGraph:
    """Rewrite every ``(a, r-of, b)`` edge as ``(b, r, a)`` in place."""
    exempt = frozenset(exempt)
    edges = []
    for e in graph.edges:
        if not is_inverse_role(e.role, exempt):
            edges.append(e)
            continue
        if not graph.is_variable(e.target):
            raise GraphError(
                f"inverse edge {e.source} :{e.role} {e.target} has a constant target"
            )
        edges.append(Triple(e.target, invert_role(e.role, exempt), e.source))
    return AmrGraph(graph.top, graph.instances, tuple(edges))


# -- surface layout -----------------------------------------------------------


@dataclass
class Branch:
    role: str  # role as written under the parent (inverted for backward edges)
    edge: Triple  # the stored edge this branch realizes
    child: Union["SurfaceNode", Term]  # expanded node, or bare variable/constant


@dataclass
class SurfaceNode:
    var: str
    branches: list[Branch] = field(default_factory=list)

    def walk(self) -> Iterator["SurfaceNode"]:
        """Preorder over expanded nodes."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(
                b.child for b in reversed(node.branches) if isinstance(b.child, SurfaceNode)
            )

    def walk_branches(self) -> Iterator[tuple["SurfaceNode", Branch]]:
        """Preorder over (parent, branch) pairs, i.e. textual edge order."""
        for b in self.branches:
            yield self, b
            if isinstance(b.child, SurfaceNode):
                yield from b.child.walk_branches()

    def height(self) -> int:
        heights = [b.child.height() + 1 for b in self.branches if isinstance(b.child, SurfaceNode)]
        return max(heights, default=0)


def _forward_reachable(graph: AmrGraph) -> set[str]:
    out: dict[str, list[str]] = {}
    for e in graph.edges:
        if graph.is_variable(e.target):
            out.setdefault(e.source, []).append(e.target)
    seen = {graph.top}
    stack = [graph.top]
    while stack:
        for nxt in out.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _build_tree(graph: AmrGraph, guided: bool) -> tuple[SurfaceNode, set[str], int]:
    reachable = _forward_reachable(graph)
    incident: dict[str, list[int]] = {v: [] for v in graph.instances}
    for i, e in enumerate(graph.edges):
        incident.setdefault(e.source, []).append(i)
        if graph.is_variable(e.target) and e.target != e.source:
            incident[e.target].append(i)

    order = list(graph.instances)
    used = [False] * len(graph.edges)
    expanded = {graph.top}
    cursor = 1

    def build(var: str) -> SurfaceNode:
        nonlocal cursor
        node = SurfaceNode(var)
        for i in incident.get(var, ()):
            if used[i]:
                continue
            e = graph.edges[i]
            if e.source == var:
                role, other = e.role, e.target
            elif e.source not in reachable:
                role, other = invert_role(e.role), e.source
            else:
                continue
            used[i] = True
            child: Union[SurfaceNode, Term] = other
            if graph.is_variable(other) and other not in expanded:
                if not guided or (cursor < len(order) and order[cursor] == other):
                    expanded.add(other)
                    cursor += 1
                    child = build(other)
            node.branches.append(Branch(role, e, child))
        return node

    root = build(graph.top)
    return root, expanded, used.count(False)


def surface_tree(graph: AmrGraph) -> SurfaceNode:
    """Spanning tree used by every linearization.

    Edges are emitted under their source in stored order; an edge whose
    source cannot be reached from the top by following edges forward is
    emitted under its target with the role inverted. Each node is expanded
    where the declaration order in ``graph.instances`` says it was declared;
    when that order is not a valid preorder, nodes are expanded at first
    visit instead.
    """
    if graph.top not in graph.instances:
        raise GraphError(f"top {graph.top!r} has no instance")
    if next(iter(graph.instances)) == graph.top:
        root, expanded, unused = _build_tree(graph, guided=True)
        if len(expanded) == len(graph.instances) and unused == 0:
            return root
    root, expanded, unused = _build_tree(graph, guided=False)
    if len(expanded) != len(graph.instances) or unused:
        raise GraphError("graph is not connected to its top")
    return root


def canonical_order(graph: AmrGraph) -> AmrGraph:
    """Reorder instances and edges into the order a serializer emits them."""
    tree = surface_tree(graph)
    instances = {n.var: graph.instances[n.var] for n in tree.walk()}
    edges = tuple(b.edge for _, b in tree.walk_branches())
    return AmrGraph(graph.top, instances, edges)


def graph_depth(graph: AmrGraph) -> int:
    """Edges on the longest root-to-node path of the surface spanning tree."""
    return surface_tree(graph).height()


def validate(graph: AmrGraph) -> list[str]:
    """Check every structural invariant; an empty list means the graph is valid."""
    problems = []
    for var, concept in graph.instances.items():
        if not var or _FORBIDDEN.search(var):
            problems.append(f"invalid variable name: {var!r}")
        if not concept or _FORBIDDEN.search(concept):
            problems.append(f"invalid concept for {var}: {concept!r}")
    if graph.top not in graph.instances:
        problems.append(f"top has no instance: {graph.top}")
    for e in graph.edges:
        if not e.role or _FORBIDDEN.search(e.role):
            problems.append(f"invalid role: {e.role!r}")
        elif e.role == "instance":
            problems.append(f"instance role used as an edge: {e.source} :instance {e.target}")
        if not isinstance(e.source, str):
            problems.append(f"edge source is not a variable: {e.source}")
        elif e.source not in graph.instances:
            problems.append(f"undeclared variable: {e.source}")
        if isinstance(e.target, str) and e.target not in graph.instances:
            problems.append(f"undeclared variable: {e.target}")
        elif not isinstance(e.target, (str, Constant)):
            problems.append(f"invalid edge target: {e.target!r}")

    if graph.top in graph.instances:
        neighbours: dict[str, set[str]] = {v: set() for v in graph.instances}
        for e in graph.edges:
            if e.source in neighbours and isinstance(e.target, str) and e.target in neighbours:
                neighbours[e.source].add(e.target)
                neighbours[e.target].add(e.source)
        seen = {graph.top}
        stack = [graph.top]
        while stack:
            for nxt in neighbours[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        for var in graph.instances:
            if var not in seen:
                problems.append(f"unreachable from top: {var}")
    return problems


def require_valid(graph: AmrGraph) -> None:
    problems = validate(graph)
    if problems:
        raise GraphError("; ".join(problems))


class VariableNamer:
    """Hands out AMR-style variable names: ``p``, ``p2``, ``p3``..."""

    def __init__(self):
        self.taken: set[str] = set()

    def __call__(self, concept: str) -> str:
        head = concept[:1].lower()
        if not ("a" <= head <= "z"):
            head = "x"
        name, n = head, 1
        while name in self.taken:
            n += 1
            name = f"{head}{n}"
        self.taken.add(name)
        return name
