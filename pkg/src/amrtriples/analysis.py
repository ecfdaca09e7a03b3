"""Corpus diagnostics: Smatch by reference depth and length, parent-child
token distances, and relation-type counts.

Lengths and distances use whitespace tokens of this package's own
serializations, not a model's subword vocabulary, so bucket boundaries are
comparable only between runs of this toolkit.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from statistics import fmean
from typing import Callable, Iterable, Optional, Sequence, TextIO

from .graph import AmrGraph, Triple, graph_depth, normalize_inverse_roles
from .linearize import LinearizationConfig
from .smatch import SmatchResult, smatch, smatch_triples

__all__ = [
    "BucketReport",
    "DistanceReport",
    "linearization_length",
    "bucket_scores",
    "smatch_by_depth",
    "smatch_by_length",
    "parent_child_distances",
    "role_census",
    "write_bucket_csv",
    "format_bucket_table",
]

Pair = tuple[AmrGraph, Optional[AmrGraph]]

BRACKETS = frozenset("()")


def linearization_length(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class BucketReport:
    key: int
    count: int
    precision: float
    recall: float
    f1: float
    width: int = 1

    @property
    def label(self) -> str:
        if self.width == 1:
            return str(self.key)
        lo = self.key * self.width
        return f"{lo}-{lo + self.width - 1}"


def bucket_scores(keys: Sequence[int], results: Sequence[SmatchResult], width: int = 1) -> list[BucketReport]:
    """Macro-average per-pair scores within each key, sorted by key."""
    if len(keys) != len(results):
        raise ValueError("one key per result required")
    groups: dict[int, list[SmatchResult]] = {}
    for key, res in zip(keys, results):
        groups.setdefault(key, []).append(res)
    return [
        BucketReport(
            key,
            len(rs),
            fmean(r.precision for r in rs),
            fmean(r.recall for r in rs),
            fmean(r.f1 for r in rs),
            width,
        )
        for key, rs in sorted(groups.items())
    ]


def _score_pairs(pairs: Sequence[Pair], scorer: Optional[Callable], results) -> list[SmatchResult]:
    if results is not None:
        if len(results) != len(pairs):
            raise ValueError("one result per pair required")
        return list(results)
    scorer = scorer or smatch
    out = []
    for ref, hyp in pairs:
        if hyp is None:
            out.append(SmatchResult(0, 0, len(smatch_triples(ref))))
        else:
            out.append(scorer(ref, hyp))
    return out


def smatch_by_depth(
    pairs: Sequence[Pair],
    scorer: Optional[Callable[[AmrGraph, AmrGraph], SmatchResult]] = None,
    results: Optional[Sequence[SmatchResult]] = None,
) -> list[BucketReport]:
    """Mean Smatch grouped by the depth of each reference graph.

    ``results`` skips scoring when per-pair results already exist; a
    ``None`` hypothesis scores zero.
    """
    if not pairs:
        raise ValueError("no pairs to analyse")
    scored = _score_pairs(pairs, scorer, results)
    return bucket_scores([graph_depth(ref) for ref, _ in pairs], scored)


def smatch_by_length(
    pairs: Sequence[Pair],
    config: LinearizationConfig,
    bucket_size: int = 50,
    scorer: Optional[Callable[[AmrGraph, AmrGraph], SmatchResult]] = None,
    results: Optional[Sequence[SmatchResult]] = None,
) -> list[BucketReport]:
    """Mean Smatch grouped by ``length // bucket_size``, where length is the
    token count of the reference linearized with ``config``."""
    if not pairs:
        raise ValueError("no pairs to analyse")
    if bucket_size < 1:
        raise ValueError("bucket_size must be positive")
    scored = _score_pairs(pairs, scorer, results)
    keys = [linearization_length(config.encode(ref)) // bucket_size for ref, _ in pairs]
    return bucket_scores(keys, scored, bucket_size)


@dataclass(frozen=True)
class DistanceReport:
    """Token distance between each edge's parent and child in one
    linearization. Bracket tokens are not counted."""

    distances: tuple[tuple[Triple, int], ...]

    @property
    def mean(self) -> float:
        return fmean(d for _, d in self.distances) if self.distances else 0.0

    @property
    def max(self) -> int:
        return max((d for _, d in self.distances), default=0)


def parent_child_distances(graph: AmrGraph, config: LinearizationConfig) -> DistanceReport:
    tokens, anchors = config.render(graph)
    position = []
    count = 0
    for tok in tokens:
        position.append(count)
        if tok not in BRACKETS:
            count += 1
    return DistanceReport(tuple((edge, position[t] - position[s]) for edge, s, t in anchors))


def role_census(graphs: Iterable[AmrGraph], normalized: bool = False) -> Counter:
    """Occurrences of each relation role across the corpus."""
    counts: Counter = Counter()
    for g in graphs:
        if normalized:
            g = normalize_inverse_roles(g)
        counts.update(e.role for e in g.edges)
    return counts


CSV_FIELDS = ("bucket_key", "count", "precision", "recall", "f1")


def write_bucket_csv(reports: Sequence[BucketReport], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        writer.writerow((r.key, r.count, f"{r.precision:.4f}", f"{r.recall:.4f}", f"{r.f1:.4f}"))


def format_bucket_table(reports: Sequence[BucketReport], title: str = "bucket") -> str:
    rows = [(title, "count", "P", "R", "F1")]
    rows += [
        (r.label, str(r.count), f"{r.precision:.4f}", f"{r.recall:.4f}", f"{r.f1:.4f}")
        for r in reports
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows)
