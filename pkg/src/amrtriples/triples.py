"""Triple linearization: ``source role target`` statements joined by ``|``.

The four strategies differ in two switches. ``keep_variables`` decides
whether nodes are written as variables (with a leading block of
``v instance concept`` triples) or as bare concept labels.
``keep_inverse_roles=False`` flips every ``(a, r-of, b)`` into ``(b, r, a)``
where it stands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph import (
    AmrGraph,
    Constant,
    GraphError,
    Triple,
    VariableNamer,
    invert_role,
    is_inverse_role,
    normalize_inverse_roles,
    require_valid,
    surface_tree,
)
from .penman import VARIABLE_SHAPE

__all__ = [
    "TripleConfig",
    "TripleDecodeError",
    "extract_triples",
    "encode_triples",
    "decode_triples",
    "split_triples",
    "render_triples",
    "CONSTANT_ROLES",
    "shared_concepts",
]

SEPARATOR = "|"

#: Roles whose targets are always constants when decoding variable-free input.
CONSTANT_ROLES = frozenset({"polarity", "mode", "polite"})

_LEXICAL_CONSTANT = re.compile(r"^([+-]|[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)$")


class TripleDecodeError(ValueError):
    pass


@dataclass(frozen=True)
class TripleConfig:
    keep_variables: bool = True
    keep_inverse_roles: bool = True

    @property
    def name(self) -> str:
        v = "O" if self.keep_variables else "X"
        r = "O" if self.keep_inverse_roles else "X"
        return f"Triple_{v}_var_{r}_invrole"


def _extract(graph: AmrGraph, config: TripleConfig):
    """``(stored edge or None, emitted triple)`` pairs in output order."""
    require_valid(graph)
    tree = surface_tree(graph)
    out = []
    if config.keep_variables:
        out.extend((None, Triple(n.var, "instance", graph.instances[n.var])) for n in tree.walk())
    for _, branch in tree.walk_branches():
        e = t = branch.edge
        if not config.keep_inverse_roles and is_inverse_role(t.role):
            if not graph.is_variable(t.target):
                raise GraphError(f"inverse edge {t.source} :{t.role} has a constant target")
            t = Triple(t.target, invert_role(t.role), t.source)
        if not config.keep_variables:
            t = Triple(
                graph.instances[t.source],
                t.role,
                graph.instances[t.target] if graph.is_variable(t.target) else t.target,
            )
        out.append((e, t))
    return out


def extract_triples(graph: AmrGraph, config: TripleConfig = TripleConfig()) -> list[Triple]:
    """Unfold the graph into triples in depth-first order."""
    return [t for _, t in _extract(graph, config)]


def render_triples(graph: AmrGraph, config: TripleConfig = TripleConfig()):
    """Tokens of the encoding plus ``(edge, source_pos, target_pos)`` for
    every graph edge, where ``edge`` is the stored edge the triple realizes."""
    tokens: list[str] = []
    anchors = []
    for edge, t in _extract(graph, config):
        if tokens:
            tokens.append(SEPARATOR)
        start = len(tokens)
        tokens.extend(t.tokens())
        if edge is not None:
            anchors.append((edge, start, start + 2))
    return tokens, anchors


def encode_triples(graph: AmrGraph, config: TripleConfig = TripleConfig()) -> str:
    return " ".join(render_triples(graph, config)[0])


def split_triples(text: str) -> list[list[str]]:
    """Token groups of a ``|``-separated triple string; pipes inside quoted
    strings do not split."""
    groups: list[list[str]] = [[]]
    quoted = False
    for tok in text.split():
        if tok == SEPARATOR and not quoted:
            groups.append([])
            continue
        if tok == '"':
            quoted = not quoted
        groups[-1].append(tok)
    if quoted:
        raise TripleDecodeError("unclosed quote")
    if groups == [[]]:
        raise TripleDecodeError("empty input")
    return groups


def _parse_group(group: list[str], index: int) -> tuple[str, str, object]:
    if len(group) < 3:
        raise TripleDecodeError(f"triple {index} has fewer than 3 tokens: {' '.join(group)!r}")
    source, role, rest = group[0], group[1], group[2:]
    if rest[0] == '"':
        if len(rest) < 2 or rest[-1] != '"' or '"' in rest[1:-1]:
            raise TripleDecodeError(f"malformed string literal in triple {index}")
        return source, role, Constant.string(" ".join(rest[1:-1]))
    if len(rest) != 1:
        raise TripleDecodeError(f"triple {index} has extra tokens: {' '.join(group)!r}")
    target = rest[0]
    if len(target) >= 2 and target[0] == '"' and target[-1] == '"':
        return source, role, Constant.string(target[1:-1])
    if '"' in target:
        raise TripleDecodeError(f"malformed string literal in triple {index}")
    return source, role, target


def decode_triples(text: str, config: TripleConfig = TripleConfig()) -> AmrGraph:
    """Rebuild a graph from a triple string.

    With variables, ``instance`` triples declare the nodes and the first one
    declared is the top. Without variables, every distinct node label
    becomes one node with a synthesized variable, and the top is the source
    of the first triple. The result is not checked for connectivity; run
    :func:`~amrtriples.graph.validate` when that matters.
    """
    parsed = [_parse_group(g, i) for i, g in enumerate(split_triples(text))]
    try:
        if config.keep_variables:
            graph = _decode_with_variables(parsed)
        else:
            graph = _decode_without_variables(parsed)
        if not config.keep_inverse_roles:
            graph = normalize_inverse_roles(graph)
    except TripleDecodeError:
        raise
    except ValueError as exc:
        raise TripleDecodeError(str(exc)) from exc
    return graph


def _decode_with_variables(parsed) -> AmrGraph:
    instances: dict[str, str] = {}
    for source, role, target in parsed:
        if role != "instance":
            continue
        if not isinstance(target, str):
            raise TripleDecodeError(f"instance of {source} is not a concept")
        if source in instances:
            raise TripleDecodeError(f"duplicate instance declaration for {source}")
        instances[source] = target
    if not instances:
        raise TripleDecodeError("no instance triples")
    edges = []
    for source, role, target in parsed:
        if role == "instance":
            continue
        if source not in instances:
            raise TripleDecodeError(f"unknown variable {source!r}")
        if isinstance(target, str):
            if target in instances:
                pass
            elif VARIABLE_SHAPE.match(target):
                raise TripleDecodeError(f"unknown variable {target!r}")
            else:
                target = Constant.from_token(target)
        edges.append(Triple(source, role, target))
    return AmrGraph(next(iter(instances)), instances, tuple(edges))


def _is_constant(role: str, token: str) -> bool:
    return role in CONSTANT_ROLES or bool(_LEXICAL_CONSTANT.match(token))


def _decode_without_variables(parsed) -> AmrGraph:
    namer = VariableNamer()
    var_of: dict[str, str] = {}
    instances: dict[str, str] = {}

    def node(label: str) -> str:
        if label not in var_of:
            var_of[label] = namer(label)
            instances[var_of[label]] = label
        return var_of[label]

    edges = []
    for source, role, target in parsed:
        if role == "instance":
            raise TripleDecodeError("instance triple in variable-free input")
        src = node(source)
        if isinstance(target, str):
            target = Constant.from_token(target) if _is_constant(role, target) else node(target)
        edges.append(Triple(src, role, target))
    return AmrGraph(var_of[parsed[0][0]], instances, tuple(edges))


def shared_concepts(graph: AmrGraph) -> set[str]:
    """Concept labels carried by more than one node.

    Variable-free decoding merges such nodes, so a non-empty result means
    the variable-free round trip cannot be exact for this graph.
    """
    seen: set[str] = set()
    dup: set[str] = set()
    for concept in graph.instances.values():
        (dup if concept in seen else seen).add(concept)
    return dup
