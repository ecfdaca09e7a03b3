"""AMR corpus files, seq2seq dataset construction and corpus-level Smatch.

Corpus files follow the AMR release layout: blocks separated by blank
lines, each made of ``# ::key value`` metadata lines followed by one Penman
graph.
"""

from __future__ import annotations

import json
import logging
import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Iterator, Optional, Sequence, TextIO

from .graph import AmrGraph
from .linearize import LinearizationConfig
from .penman import PenmanError, format_penman, parse_penman
from .smatch import DEFAULT_RESTARTS, SmatchResult, smatch, smatch_triples

__all__ = [
    "CorpusEntry",
    "CorpusError",
    "CorpusEntries",
    "SeqRecord",
    "DatasetError",
    "CorpusScore",
    "read_blocks",
    "read_amr_corpus",
    "write_amr_corpus",
    "build_seq2seq_dataset",
    "write_dataset",
    "read_dataset",
    "score_corpus",
]

log = logging.getLogger(__name__)

_WHOLE_LINE_KEYS = ("snt", "tok", "lemmas", "alignments")
_META = re.compile(r"(?:^|\s)::(\S+)")


class CorpusError(ValueError):
    def __init__(self, message: str, block: Optional[int] = None):
        self.block = block
        prefix = f"block {block}: " if block is not None else ""
        super().__init__(prefix + message)


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    id: Optional[str]
    sentence: Optional[str]
    graph: AmrGraph
    metadata: tuple[tuple[str, str], ...] = ()

    @classmethod
    def create(cls, graph: AmrGraph, id: Optional[str] = None, sentence: Optional[str] = None, **extra):
        meta = []
        if id is not None:
            meta.append(("id", id))
        if sentence is not None:
            meta.append(("snt", sentence))
        meta.extend((k, str(v)) for k, v in extra.items())
        return cls(id, sentence, graph, tuple(meta))


class CorpusEntries(list):
    """A list of entries that also records blocks skipped while reading."""

    def __init__(self, entries=(), skipped=()):
        super().__init__(entries)
        self.skipped: list[CorpusError] = list(skipped)


def _parse_metadata(line: str) -> list[tuple[str, str]]:
    body = line[1:].strip()
    for key in _WHOLE_LINE_KEYS:
        prefix = f"::{key}"
        if body == prefix or body.startswith(prefix + " "):
            return [(key, body[len(prefix):].strip())]
    matches = list(_META.finditer(body))
    pairs = []
    for k, m in enumerate(matches):
        end = matches[k + 1].start() if k + 1 < len(matches) else len(body)
        pairs.append((m.group(1), body[m.end():end].strip()))
    return pairs


def read_blocks(stream: Iterable[str]) -> Iterator[tuple[list[tuple[str, str]], str]]:
    """Yield ``(metadata, penman_text)`` for each blank-line-separated block."""
    meta: list[tuple[str, str]] = []
    body: list[str] = []
    started = False
    for raw in stream:
        line = raw.rstrip("\n")
        if not line.strip():
            if started:
                yield meta, "\n".join(body)
            meta, body, started = [], [], False
            continue
        started = True
        stripped = line.lstrip()
        if stripped.startswith("#") and not body:
            if "::" in stripped:
                meta.extend(_parse_metadata(stripped))
            continue
        body.append(line)
    if started:
        yield meta, "\n".join(body)


def _entry(meta, text, index) -> CorpusEntry:
    if not text.strip():
        raise CorpusError("block has no graph", index)
    try:
        graph = parse_penman(text)
    except PenmanError as exc:
        raise CorpusError(str(exc), index) from exc
    keys = dict(meta)
    return CorpusEntry(keys.get("id"), keys.get("snt") or None, graph, tuple(meta))


def read_amr_corpus(stream: Iterable[str], lenient: bool = False) -> CorpusEntries:
    """Read every block of an AMR corpus file.

    A block whose graph fails to parse raises :class:`CorpusError` carrying
    its block index, unless ``lenient``, in which case it is skipped and
    recorded in ``.skipped`` of the returned list.
    """
    out = CorpusEntries()
    ids = set()
    for index, (meta, text) in enumerate(read_blocks(stream)):
        try:
            entry = _entry(meta, text, index)
            if entry.id is not None and entry.id in ids:
                raise CorpusError(f"duplicate id {entry.id!r}", index)
        except CorpusError as exc:
            if not lenient:
                raise
            log.warning("skipping %s", exc)
            out.skipped.append(exc)
            continue
        if entry.id is not None:
            ids.add(entry.id)
        out.append(entry)
    return out


def read_graphs(stream: Iterable[str]) -> list[Optional[AmrGraph]]:
    """Graphs of a corpus file in block order, ``None`` where parsing failed.

    Used for hypothesis files, whose order must stay aligned with the
    references.
    """
    out = []
    for index, (meta, text) in enumerate(read_blocks(stream)):
        try:
            out.append(_entry(meta, text, index).graph)
        except CorpusError as exc:
            log.info("unparseable hypothesis: %s", exc)
            out.append(None)
    return out


def write_amr_corpus(entries: Iterable[CorpusEntry], stream: TextIO) -> None:
    first = True
    for entry in entries:
        if not first:
            stream.write("\n")
        first = False
        for key, value in entry.metadata:
            stream.write(f"# ::{key} {value}".rstrip() + "\n")
        stream.write(format_penman(entry.graph) + "\n")


# -- seq2seq data ---------------------------------------------------------------


@dataclass(frozen=True)
class SeqRecord:
    id: str
    task: str
    source: str
    target: str

    def as_tsv(self) -> str:
        return "\t".join((self.id, self.task, self.source, self.target))


def _tagged(task: str, sentence: str) -> str:
    return f"{task}: " + " ".join(sentence.split())


def build_seq2seq_dataset(
    entries: Sequence[CorpusEntry],
    configs: Sequence[LinearizationConfig],
    multitask: bool = False,
    seed: int = 0,
) -> list[SeqRecord]:
    """One record per (entry, config).

    Sources are the sentence prefixed with the task tag (``penman: `` or
    ``triple: ``). Multitask output pairs one Penman and one triple config
    and is shuffled with ``seed``; single-task output keeps entry order.
    """
    if not configs:
        raise DatasetError("at least one linearization config is required")
    if multitask:
        formats = sorted(c.format for c in configs)
        if formats != ["penman", "triple"]:
            raise DatasetError("multitask needs exactly one penman and one triple config")
    records = []
    for n, entry in enumerate(entries):
        if not entry.sentence:
            raise DatasetError(f"entry {entry.id or n} has no sentence")
        rid = entry.id if entry.id is not None else str(n)
        for config in configs:
            records.append(
                SeqRecord(rid, config.task, _tagged(config.task, entry.sentence), config.encode(entry.graph))
            )
    if multitask:
        random.Random(seed).shuffle(records)
    return records


def write_dataset(records: Iterable[SeqRecord], stream: TextIO, fmt: str = "tsv") -> None:
    for r in records:
        if fmt == "tsv":
            stream.write(r.as_tsv() + "\n")
        elif fmt == "jsonl":
            stream.write(json.dumps(r.__dict__, ensure_ascii=False) + "\n")
        else:
            raise ValueError(f"unknown dataset format {fmt!r}")


def read_dataset(stream: Iterable[str], fmt: str = "tsv") -> list[SeqRecord]:
    out = []
    for line in stream:
        line = line.rstrip("\n")
        if not line:
            continue
        if fmt == "jsonl":
            out.append(SeqRecord(**json.loads(line)))
        else:
            parts = line.split("\t")
            if len(parts) != 4:
                raise DatasetError(f"expected 4 tab-separated fields, got {len(parts)}")
            out.append(SeqRecord(*parts))
    return out


# -- scoring --------------------------------------------------------------------


@dataclass
class CorpusScore:
    """Micro-averaged corpus Smatch plus the per-pair results."""

    pairs: list[SmatchResult]
    unparseable: int = 0
    skipped: int = 0
    matched: int = field(init=False)
    total_hyp: int = field(init=False)
    total_ref: int = field(init=False)

    def __post_init__(self):
        self.matched = sum(r.matched for r in self.pairs)
        self.total_hyp = sum(r.total_hyp for r in self.pairs)
        self.total_ref = sum(r.total_ref for r in self.pairs)

    @property
    def result(self) -> SmatchResult:
        return SmatchResult(self.matched, self.total_hyp, self.total_ref)

    @property
    def precision(self) -> float:
        return self.result.precision

    @property
    def recall(self) -> float:
        return self.result.recall

    @property
    def f1(self) -> float:
        return self.result.f1


def _score_one(pair, restarts, seed, exact_max_vars, canonicalize) -> SmatchResult:
    ref, hyp = pair
    if hyp is None:
        return SmatchResult(0, 0, len(smatch_triples(ref, canonicalize)))
    return smatch(ref, hyp, restarts, seed, exact_max_vars, canonicalize)


def score_corpus(
    refs: Sequence[AmrGraph],
    hyps: Sequence[Optional[AmrGraph]],
    restarts: int = DEFAULT_RESTARTS,
    seed: Optional[int] = None,
    exact_max_vars: int = 0,
    canonicalize: bool = True,
    jobs: int = 1,
) -> CorpusScore:
    """Score order-aligned graph lists.

    A ``None`` hypothesis (one that could not be parsed or decoded) matches
    nothing and contributes its reference's full triple count.
    """
    if len(refs) != len(hyps):
        raise CorpusError(f"{len(refs)} reference graphs but {len(hyps)} hypotheses")
    score = partial(
        _score_one, restarts=restarts, seed=seed, exact_max_vars=exact_max_vars, canonicalize=canonicalize
    )
    pairs = list(zip(refs, hyps))
    if jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(score, pairs, chunksize=max(1, len(pairs) // (4 * jobs))))
    else:
        results = [score(p) for p in pairs]
    return CorpusScore(results, unparseable=sum(h is None for h in hyps))
