"""Smatch: triple-overlap F1 between two AMR graphs under the best variable
alignment.

Two matchers share the same triple sets. :func:`smatch_hillclimb` is the
usual restart hill-climbing search, run by a compiled kernel when one is
built. :func:`smatch_exact` searches every alignment exhaustively and is
meant as an oracle for small graphs.

Argument order is ``(ref, hyp)``: precision is measured against the
hypothesis triple count, recall against the reference count.
"""

from __future__ import annotations

import os
import random
from array import array
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import _backend
from .graph import NON_INVERSE_OF, AmrGraph, Constant, invert_role, is_inverse_role

__all__ = [
    "DEFAULT_RESTARTS",
    "DEFAULT_SEED",
    "SmatchError",
    "SmatchTripleSet",
    "SmatchResult",
    "smatch_triples",
    "smatch_exact",
    "smatch_hillclimb",
    "smatch",
]

DEFAULT_RESTARTS = 4
DEFAULT_SEED = 13
SEED_ENV_VAR = "AMRTRIPLES_SEED"


def default_seed() -> int:
    value = os.environ.get(SEED_ENV_VAR)
    return int(value) if value not in (None, "") else DEFAULT_SEED


class SmatchError(ValueError):
    pass


@dataclass(frozen=True)
class SmatchTripleSet:
    """Deduplicated triples of one graph, split the way Smatch scores them.

    Concepts and constant values are lower-cased. ``attributes`` holds
    constant-target edges plus one ``(top, "TOP", "top")`` entry.
    """

    variables: tuple[str, ...]
    instances: tuple[tuple[str, str], ...]
    attributes: tuple[tuple[str, str, str], ...]
    relations: tuple[tuple[str, str, str], ...]

    def __len__(self) -> int:
        return len(self.instances) + len(self.attributes) + len(self.relations)


def _dedupe(items):
    return tuple(dict.fromkeys(items))


def smatch_triples(
    graph: AmrGraph, canonicalize: bool = True, exempt: Iterable[str] = NON_INVERSE_OF
) -> SmatchTripleSet:
    exempt = frozenset(exempt)
    attributes = [(graph.top, "TOP", "top")]
    relations = []
    for e in graph.edges:
        if isinstance(e.target, Constant):
            attributes.append((e.source, e.role, e.target.value.lower()))
        elif canonicalize and is_inverse_role(e.role, exempt):
            relations.append((e.target, invert_role(e.role, exempt), e.source))
        else:
            relations.append((e.source, e.role, e.target))
    return SmatchTripleSet(
        variables=tuple(graph.instances),
        instances=tuple((v, c.lower()) for v, c in graph.instances.items()),
        attributes=_dedupe(attributes),
        relations=_dedupe(relations),
    )


@dataclass(frozen=True)
class SmatchResult:
    matched: int
    total_hyp: int
    total_ref: int
    mapping: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.matched <= min(self.total_hyp, self.total_ref):
            raise ValueError(
                f"matched={self.matched} outside [0, min({self.total_hyp}, {self.total_ref})]"
            )

    @property
    def precision(self) -> float:
        return self.matched / self.total_hyp if self.total_hyp else 0.0

    @property
    def recall(self) -> float:
        return self.matched / self.total_ref if self.total_ref else 0.0

    @property
    def f1(self) -> float:
        # equal to 2PR / (P + R), computed without the intermediate rounding
        total = self.total_hyp + self.total_ref
        return 2 * self.matched / total if self.matched else 0.0

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "matched": self.matched,
            "total_hyp": self.total_hyp,
            "total_ref": self.total_ref,
            "mapping": dict(self.mapping),
        }


# -- exact oracle ---------------------------------------------------------------


def smatch_exact(
    ref: AmrGraph, hyp: AmrGraph, max_vars: int = 8, canonicalize: bool = True
) -> SmatchResult:
    """Globally optimal Smatch by exhaustive search over alignments.

    Unmapped variables match nothing and extending an alignment never loses
    a match, so only maximal injections need visiting: every hypothesis
    variable is mapped while unused reference variables remain. The search
    assigns hypothesis variables in order and abandons a branch once the
    matches so far plus every still-undecided triple cannot beat the best
    complete alignment found.
    """
    r = smatch_triples(ref, canonicalize)
    h = smatch_triples(hyp, canonicalize)
    if min(len(r.variables), len(h.variables)) > max_vars:
        raise SmatchError(
            f"exact matching needs at most {max_vars} variables on the smaller side; "
            f"got {len(h.variables)} and {len(r.variables)}"
        )
    ref_index = {("i", v, c) for v, c in r.instances}
    ref_index.update(("a", v, role, x) for v, role, x in r.attributes)
    ref_index.update(("r", v, role, w) for v, role, w in r.relations)
    ref_concept = dict(r.instances)

    hvars = h.variables
    order = {v: k for k, v in enumerate(hvars)}
    # triples whose last variable (in assignment order) is hvars[k]
    decided_at: list[list[tuple]] = [[] for _ in hvars]
    for v, c in h.instances:
        decided_at[order[v]].append(("i", v, c))
    for v, role, x in h.attributes:
        decided_at[order[v]].append(("a", v, role, x))
    for v, role, w in h.relations:
        decided_at[max(order[v], order[w])].append(("r", v, role, w))
    remaining = [0] * (len(hvars) + 1)
    for k in range(len(hvars) - 1, -1, -1):
        remaining[k] = remaining[k + 1] + len(decided_at[k])

    ceiling = min(len(h), len(r))
    hconcept = dict(h.instances)
    best = [-1, {}]
    mp: dict = {}
    used: set = set()

    def matches(t) -> bool:
        if t[0] == "r":
            return ("r", mp[t[1]], t[2], mp[t[3]]) in ref_index
        return (t[0], mp[t[1]], *t[2:]) in ref_index

    def search(k: int, matched: int) -> bool:
        if k == len(hvars):
            if matched > best[0]:
                best[0], best[1] = matched, {a: b for a, b in mp.items() if b is not None}
            return best[0] == ceiling
        if matched + remaining[k] <= best[0]:
            return False
        v = hvars[k]
        # same-concept candidates first; order affects speed only
        options = sorted(
            (j for j in r.variables if j not in used),
            key=lambda j: ref_concept[j] != hconcept[v],
        )
        if len(hvars) - k > len(options):
            options.append(None)
        for j in options:
            mp[v] = j
            if j is not None:
                used.add(j)
            gained = sum(1 for t in decided_at[k] if j is not None and matches(t))
            done = search(k + 1, matched + gained)
            if j is not None:
                used.discard(j)
            del mp[v]
            if done:
                return True
        return False

    search(0, 0)
    return SmatchResult(max(best[0], 0), len(h), len(r), best[1])


# -- hill climbing --------------------------------------------------------------


@dataclass
class _Problem:
    hyp_vars: tuple[str, ...]
    ref_vars: tuple[str, ...]
    unary: array
    offsets: array
    targets: array
    same_concept: list[list[int]]

    @property
    def n(self):
        return len(self.hyp_vars)

    @property
    def m(self):
        return len(self.ref_vars)


def _compile(r: SmatchTripleSet, h: SmatchTripleSet) -> _Problem:
    n, m = len(h.variables), len(r.variables)
    hi = {v: i for i, v in enumerate(h.variables)}
    ri = {v: j for j, v in enumerate(r.variables)}
    unary = array("i", bytes(4 * n * m))

    by_concept = defaultdict(list)
    for v, c in r.instances:
        by_concept[c].append(ri[v])
    same_concept = [[] for _ in range(n)]
    for v, c in h.instances:
        for j in by_concept.get(c, ()):
            unary[hi[v] * m + j] += 1
            same_concept[hi[v]].append(j)

    by_attr = defaultdict(list)
    for v, role, x in r.attributes:
        by_attr[role, x].append(ri[v])
    for v, role, x in h.attributes:
        for j in by_attr.get((role, x), ()):
            unary[hi[v] * m + j] += 1

    by_role = defaultdict(list)
    for v, role, w in r.relations:
        by_role[role].append((ri[v], ri[w]))
    adjacency = [[] for _ in range(n * m)]
    for v, role, w in h.relations:
        i, k = hi[v], hi[w]
        for j, l in by_role.get(role, ()):
            if i == k or j == l:
                # a self-loop only pairs with a self-loop; mixed cases cannot
                # match under an injective mapping
                if i == k and j == l:
                    unary[i * m + j] += 1
                continue
            adjacency[i * m + j].append(k * m + l)
            adjacency[k * m + l].append(i * m + j)

    offsets = array("i", [0])
    targets = array("i")
    for entries in adjacency:
        targets.extend(entries)
        offsets.append(len(targets))
    return _Problem(h.variables, r.variables, unary, offsets, targets, same_concept)


def _smart_init(problem: _Problem) -> array:
    """Map each hypothesis variable to an unused reference variable with the
    same concept, preferring most unary matches, then the earliest one.

    Taking the earliest candidate makes the start the identity on a graph
    scored against itself.
    """
    mapping = array("i", [-1] * problem.n)
    used = set()
    m = problem.m
    for i in range(problem.n):
        options = [j for j in problem.same_concept[i] if j not in used]
        if not options:
            continue
        j = max(options, key=lambda j: (problem.unary[i * m + j], -j))
        mapping[i] = j
        used.add(j)
    return mapping


def _random_init(problem: _Problem, rng: random.Random) -> array:
    hyp = list(range(problem.n))
    ref = list(range(problem.m))
    rng.shuffle(hyp)
    rng.shuffle(ref)
    mapping = array("i", [-1] * problem.n)
    for i, j in zip(hyp, ref):
        mapping[i] = j
    return mapping


def _restart_rng(seed: int, restart: int) -> random.Random:
    # derived per restart so the result does not depend on execution order
    return random.Random(f"{seed}:{restart}")


def smatch_hillclimb(
    ref: AmrGraph,
    hyp: AmrGraph,
    restarts: int = DEFAULT_RESTARTS,
    seed: Optional[int] = None,
    canonicalize: bool = True,
    kernel=None,
) -> SmatchResult:
    """Smatch by hill climbing: one smart start and ``restarts - 1`` random
    starts, keeping the best. Deterministic for a given ``seed``."""
    if restarts < 1:
        raise SmatchError("restarts must be at least 1")
    seed = default_seed() if seed is None else seed
    kernel = kernel or _backend.kernel
    r = smatch_triples(ref, canonicalize)
    h = smatch_triples(hyp, canonicalize)
    if not r.variables or not h.variables:
        return SmatchResult(0, len(h), len(r), {})
    problem = _compile(r, h)

    best, best_mapping = -1, None
    for restart in range(restarts):
        rng = _restart_rng(seed, restart)
        mapping = _smart_init(problem) if restart == 0 else _random_init(problem, rng)
        score = kernel.hill_climb(
            problem.n, problem.m, problem.unary, problem.offsets, problem.targets, mapping
        )
        if score > best:
            best, best_mapping = score, mapping
    result_map = {
        problem.hyp_vars[i]: problem.ref_vars[j] for i, j in enumerate(best_mapping) if j >= 0
    }
    return SmatchResult(best, len(h), len(r), result_map)


def smatch(
    ref: AmrGraph,
    hyp: AmrGraph,
    restarts: int = DEFAULT_RESTARTS,
    seed: Optional[int] = None,
    exact_max_vars: int = 0,
    canonicalize: bool = True,
) -> SmatchResult:
    """Score one pair, using the exact matcher when the smaller graph has at
    most ``exact_max_vars`` variables and hill climbing otherwise."""
    if exact_max_vars and min(len(ref.instances), len(hyp.instances)) <= exact_max_vars:
        return smatch_exact(ref, hyp, max_vars=exact_max_vars, canonicalize=canonicalize)
    return smatch_hillclimb(ref, hyp, restarts=restarts, seed=seed, canonicalize=canonicalize)
