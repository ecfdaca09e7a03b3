"""Seeded random AMR-like graphs for property tests and benchmarks."""

from __future__ import annotations

import random
from typing import Sequence

from .graph import AmrGraph, Constant, Triple, VariableNamer, canonical_order, invert_role

__all__ = ["CONCEPTS", "ROLES", "random_graph", "perturb"]

CONCEPTS = (
    "person", "thing", "see-01", "seem-01", "want-01", "go-02", "country", "city",
    "name", "many", "say-01", "know-01", "we", "it", "and", "have-03", "possible-01",
    "government-organization", "date-entity", "consist-01",
)
ROLES = (
    "ARG0", "ARG1", "ARG2", "ARG3", "mod", "time", "location", "manner", "poss",
    "domain", "op1", "op2", "consist-of", "purpose",
)
WORDS = ("China", "France", "New York", "Obama", "Paris")


def random_graph(
    rng: random.Random,
    max_nodes: int = 12,
    min_nodes: int = 1,
    concepts: Sequence[str] = CONCEPTS,
    p_inverse: float = 0.25,
    p_backward: float = 0.1,
    p_reentrancy: float = 0.3,
    p_constant: float = 0.4,
) -> AmrGraph:
    """A connected graph with up to ``max_nodes`` variables, in canonical order.

    Tree edges may be stored with an inverse role (``p_inverse``) or pointing
    from child to parent (``p_backward``), so the generator also produces
    graphs whose surface layout needs backward traversal.
    """
    n = rng.randint(min_nodes, max_nodes)
    namer = VariableNamer()
    labels = [rng.choice(concepts) for _ in range(n)]
    names = [namer(c) for c in labels]
    edges: list[Triple] = []
    seen = set()

    def add(t: Triple):
        if t not in seen:
            seen.add(t)
            edges.append(t)

    for k in range(1, n):
        parent, child = names[rng.randrange(k)], names[k]
        role = rng.choice(ROLES)
        roll = rng.random()
        if roll < p_inverse:
            add(Triple(parent, invert_role(role), child))
        elif roll < p_inverse + p_backward:
            add(Triple(child, role, parent))
        else:
            add(Triple(parent, role, child))
    if n > 1:
        for _ in range(rng.randint(0, max(1, n // 3))):
            if rng.random() < p_reentrancy:
                a, b = rng.sample(names, 2)
                add(Triple(a, rng.choice(ROLES), b))
    for name in names:
        if rng.random() < p_constant:
            kind = rng.randrange(3)
            if kind == 0:
                add(Triple(name, "polarity", Constant("-")))
            elif kind == 1:
                add(Triple(name, "quant", Constant(str(rng.randint(1, 500)), "number")))
            else:
                add(Triple(name, rng.choice(("name", "op1", "wiki")), Constant.string(rng.choice(WORDS))))
    rng.shuffle(edges)
    return canonical_order(AmrGraph(names[0], dict(zip(names, labels)), tuple(edges)))


def perturb(graph: AmrGraph, rng: random.Random, edits: int = 2) -> AmrGraph:
    """A noisy copy: variables renamed, then ``edits`` random concept swaps,
    edge deletions or edge insertions. The result need not be connected."""
    names = list(graph.instances)
    shuffled = names[:]
    rng.shuffle(shuffled)
    renamed = graph.rename({v: f"z{i}" for i, v in enumerate(shuffled)})
    instances = dict(renamed.instances)
    edges = list(renamed.edges)
    variables = list(instances)
    for _ in range(edits):
        op = rng.randrange(3)
        if op == 0:
            v = rng.choice(variables)
            instances[v] = rng.choice(CONCEPTS)
        elif op == 1 and edges:
            edges.pop(rng.randrange(len(edges)))
        else:
            a, b = rng.choice(variables), rng.choice(variables)
            edges.append(Triple(a, rng.choice(ROLES), b))
    return AmrGraph(renamed.top, instances, tuple(edges))
