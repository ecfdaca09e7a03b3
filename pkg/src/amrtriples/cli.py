"""Command-line interface: ``amrtriples <command> ...``.

Failures exit non-zero after printing one JSON object on stderr, e.g.
``{"error": "PenmanError", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
from typing import Optional, Sequence

from . import _backend
from .analysis import (
    format_bucket_table,
    parent_child_distances,
    role_census,
    smatch_by_depth,
    smatch_by_length,
    write_bucket_csv,
)
from .corpus import (
    CorpusError,
    build_seq2seq_dataset,
    read_amr_corpus,
    read_graphs,
    score_corpus,
    write_dataset,
)
from .graph import GraphError, validate
from .linearize import VARIANTS, LinearizationConfig
from .penman import format_penman
from .smatch import DEFAULT_RESTARTS, default_seed, smatch
from .triples import shared_concepts

log = logging.getLogger("amrtriples")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, code=2)


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(code)


@contextlib.contextmanager
def _open(path: str, mode: str = "r"):
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8") as fh:
            yield fh


def _config(args) -> LinearizationConfig:
    if getattr(args, "variant", None):
        return LinearizationConfig.from_name(args.variant)
    return LinearizationConfig(args.format, args.keep_variables, args.keep_inverse_roles)


def _add_config_args(p: argparse.ArgumentParser, fmt_default: str = "triple"):
    p.add_argument("--format", choices=("penman", "triple"), default=fmt_default)
    p.add_argument("--keep-variables", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--keep-inverse-roles", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--variant", choices=sorted(VARIANTS), help="named variant; overrides the three flags above")


def _add_scoring_args(p: argparse.ArgumentParser):
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=None, help="default: $AMRTRIPLES_SEED or 13")
    p.add_argument(
        "--exact-max-vars", type=int, default=0, metavar="K",
        help="use the exact matcher for pairs whose smaller graph has at most K variables",
    )
    p.add_argument("--no-canonicalize", action="store_true", help="score inverse roles as written")
    p.add_argument("--jobs", type=int, default=1)


def _read_entries(path: str, lenient: bool):
    with _open(path) as fh:
        entries = read_amr_corpus(fh, lenient=lenient)
    if entries.skipped:
        log.warning("skipped %d unparseable block(s) in %s", len(entries.skipped), path)
    return entries


def _read_hyps(path: str, variant: Optional[str]) -> list:
    with _open(path) as fh:
        if variant is None:
            return read_graphs(fh)
        config = LinearizationConfig.from_name(variant)
        out = []
        for line in fh:
            try:
                out.append(config.decode(line.strip()))
            except ValueError as exc:
                log.info("undecodable hypothesis: %s", exc)
                out.append(None)
        return out


def _read_pairs(args):
    with _open(args.ref) as fh:
        refs = read_graphs(fh)
    hyps = _read_hyps(args.hyp, args.hyp_variant)
    if len(refs) != len(hyps):
        raise CorpusError(f"{len(refs)} reference graphs but {len(hyps)} hypotheses")
    bad = [i for i, r in enumerate(refs) if r is None]
    if bad and not args.lenient:
        raise CorpusError(f"unparseable reference graph at block {bad[0]}")
    pairs = [(r, h) for r, h in zip(refs, hyps) if r is not None]
    return pairs, len(bad)


# -- commands -------------------------------------------------------------------


def cmd_encode(args):
    config = _config(args)
    entries = _read_entries(args.input, args.lenient)
    with _open(args.output, "w") as out:
        for entry in entries:
            out.write(config.encode(entry.graph) + "\n")


def cmd_decode(args):
    config = _config(args)
    failures = 0
    with _open(args.input) as fh, _open(args.output, "w") as out:
        first = True
        for n, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            if not first:
                out.write("\n")
            first = False
            out.write(f"# ::id {args.id_prefix}{n}\n")
            try:
                graph = config.decode(line)
                problems = validate(graph)
                if problems:
                    raise GraphError("; ".join(problems))
            except ValueError as exc:
                if not args.lenient:
                    raise CliError(f"line {n + 1}: {exc}") from exc
                failures += 1
                # metadata-only block keeps later files aligned; it reads back as unparseable
                out.write(f"# ::decode-error {exc}\n")
                continue
            out.write(format_penman(graph) + "\n")
    if failures:
        log.warning("%d line(s) could not be decoded", failures)


def cmd_roundtrip(args):
    config = _config(args)
    entries = _read_entries(args.input, args.lenient)
    perfect = failures = collisions = 0
    results = []
    for entry in entries:
        if shared_concepts(entry.graph):
            collisions += 1
        try:
            decoded = config.decode(config.encode(entry.graph))
        except ValueError as exc:
            failures += 1
            log.info("%s: decode failed: %s", entry.id, exc)
            continue
        res = smatch(entry.graph, decoded, args.restarts, args.seed, args.exact_max_vars, not args.no_canonicalize)
        results.append(res)
        perfect += res.f1 == 1.0
        if args.verbose:
            print(f"{entry.id}\t{res.f1:.4f}")
    summary = {
        "variant": config.name,
        "entries": len(entries),
        "perfect": perfect,
        "decode_failures": failures,
        "shared_concept_graphs": collisions,
        "mean_f1": sum(r.f1 for r in results) / len(results) if results else 0.0,
    }
    print(json.dumps(summary))


def cmd_smatch(args):
    pairs, skipped = _read_pairs(args)
    score = score_corpus(
        [r for r, _ in pairs], [h for _, h in pairs],
        restarts=args.restarts, seed=args.seed, exact_max_vars=args.exact_max_vars,
        canonicalize=not args.no_canonicalize, jobs=args.jobs,
    )
    score.skipped = skipped
    if args.json:
        payload = {
            "precision": score.precision, "recall": score.recall, "f1": score.f1,
            "matched": score.matched, "total_hyp": score.total_hyp, "total_ref": score.total_ref,
            "unparseable": score.unparseable, "skipped": score.skipped,
        }
        if args.per_pair:
            payload["pairs"] = [r.as_dict() for r in score.pairs]
        print(json.dumps(payload))
        return
    if args.per_pair:
        for n, r in enumerate(score.pairs):
            print(f"{n}\t{r.precision:.4f}\t{r.recall:.4f}\t{r.f1:.4f}")
    print(f"Precision: {score.precision:.4f}")
    print(f"Recall: {score.recall:.4f}")
    print(f"F-score: {score.f1:.4f}")
    if score.unparseable or score.skipped:
        print(f"Unparseable hypotheses: {score.unparseable}; skipped references: {score.skipped}")


def cmd_stats(args):
    config = _config(args)
    sections = []
    if args.by:
        if not args.hyp:
            raise CliError("--by needs a hypothesis file")
        pairs, _ = _read_pairs(args)
        results = score_corpus(
            [r for r, _ in pairs], [h for _, h in pairs],
            restarts=args.restarts, seed=args.seed, exact_max_vars=args.exact_max_vars,
            canonicalize=not args.no_canonicalize, jobs=args.jobs,
        ).pairs
        if args.by == "depth":
            reports = smatch_by_depth(pairs, results=results)
        else:
            reports = smatch_by_length(pairs, config, args.bucket_size, results=results)
        sections.append(("buckets", reports))
        graphs = [r for r, _ in pairs]
    else:
        with _open(args.ref) as fh:
            graphs = [g for g in read_graphs(fh) if g is not None]

    with _open(args.output, "w") as out:
        for _, payload in sections:
            if args.table:
                out.write(format_bucket_table(payload, args.by) + "\n")
            else:
                write_bucket_csv(payload, out)
        if args.distances:
            if sections:
                out.write("\n")
            out.write("graph,edges,mean_distance,max_distance\n")
            for n, g in enumerate(graphs):
                rep = parent_child_distances(g, config)
                out.write(f"{n},{len(rep.distances)},{rep.mean:.4f},{rep.max}\n")
        if args.role_census:
            if sections or args.distances:
                out.write("\n")
            raw = role_census(graphs)
            norm = role_census(graphs, normalized=True)
            out.write("role,raw,normalized\n")
            for role in sorted(set(raw) | set(norm)):
                out.write(f"{role},{raw.get(role, 0)},{norm.get(role, 0)}\n")
            out.write(f"# distinct roles: raw={len(raw)} normalized={len(norm)}\n")


def cmd_prepare(args):
    seed = default_seed() if args.seed is None else args.seed
    if args.variant:
        configs = [LinearizationConfig.from_name(v) for v in args.variant]
    elif args.multitask:
        configs = [VARIANTS["Penman_O_var_O_invrole"], VARIANTS["Triple_O_var_O_invrole"]]
    else:
        configs = [_config(args)]
    entries = _read_entries(args.input, args.lenient)
    records = build_seq2seq_dataset(entries, configs, multitask=args.multitask, seed=seed)
    with _open(args.output, "w") as out:
        write_dataset(records, out, "jsonl" if args.jsonl else "tsv")
    log.info("wrote %d records", len(records))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amrtriples", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--kernel", choices=("auto", "cython", "python"), default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="linearize an AMR corpus, one graph per line")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--lenient", action="store_true", help="skip unparseable blocks")
    _add_config_args(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="rebuild an AMR corpus from linearized lines")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--lenient", action="store_true", help="emit an error block instead of failing")
    p.add_argument("--id-prefix", default="line-")
    _add_config_args(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip", help="encode, decode and score every graph against itself")
    p.add_argument("input")
    p.add_argument("--lenient", action="store_true")
    _add_config_args(p)
    _add_scoring_args(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("smatch", help="corpus Smatch between reference and hypothesis files")
    p.add_argument("ref")
    p.add_argument("hyp")
    p.add_argument("--hyp-variant", choices=sorted(VARIANTS), help="hypotheses are linearized lines")
    p.add_argument("--lenient", action="store_true", help="drop pairs whose reference does not parse")
    p.add_argument("--per-pair", action="store_true")
    p.add_argument("--json", action="store_true")
    _add_scoring_args(p)
    p.set_defaults(func=cmd_smatch)

    p = sub.add_parser("stats", help="depth/length buckets, parent-child distances, role census")
    p.add_argument("ref")
    p.add_argument("hyp", nargs="?")
    p.add_argument("--by", choices=("depth", "length"))
    p.add_argument("--bucket-size", type=int, default=50)
    p.add_argument("--distances", action="store_true")
    p.add_argument("--role-census", action="store_true")
    p.add_argument("--hyp-variant", choices=sorted(VARIANTS))
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--table", action="store_true", help="human-readable table instead of CSV")
    p.add_argument("-o", "--output", default="-")
    _add_config_args(p)
    _add_scoring_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("prepare", help="build a seq2seq training file")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--multitask", action="store_true")
    p.add_argument("--seed", type=int, default=None, help="default: $AMRTRIPLES_SEED or 13")
    p.add_argument("--variant", action="append", choices=sorted(VARIANTS))
    p.add_argument("--jsonl", action="store_true", help="one JSON object per line instead of TSV")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--format", choices=("penman", "triple"), default="triple")
    p.add_argument("--keep-variables", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--keep-inverse-roles", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_prepare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.kernel:
        _backend.kernel = _backend.load_kernel(args.kernel)
        os.environ[_backend.ENV_VAR] = args.kernel  # process-pool workers
    try:
        args.func(args)
    except (CliError, ValueError, OSError, ImportError) as exc:
        _fail(type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
