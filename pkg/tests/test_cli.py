import csv
import io
import json
import random

import pytest

from amrtriples import _backend
from amrtriples.cli import main
from amrtriples.corpus import CorpusEntry, read_amr_corpus, write_amr_corpus
from amrtriples.graph import validate
from amrtriples.random_graphs import perturb, random_graph

from samples import CHINA_PENMAN, CHINA_SENTENCE, CHINA_TRIPLES, NUTTERS_PENMAN


@pytest.fixture(autouse=True)
def keep_kernel(monkeypatch):
    # --kernel rebinds the module-level kernel and sets the env var
    monkeypatch.setattr(_backend, "kernel", _backend.kernel)
    monkeypatch.delenv(_backend.ENV_VAR, raising=False)


@pytest.fixture
def corpus(tmp_path):
    path = tmp_path / "ref.amr"
    path.write_text(
        f"# ::id c1\n# ::snt {CHINA_SENTENCE}\n{CHINA_PENMAN}\n\n# ::id f2\n# ::snt We never.\n{NUTTERS_PENMAN}\n"
    )
    return path


def write_random_corpus(path, count, base=0):
    entries = [
        CorpusEntry.create(random_graph(random.Random(base + k)), id=f"g{k}", sentence=f"sentence {k}")
        for k in range(count)
    ]
    with open(path, "w") as fh:
        write_amr_corpus(entries, fh)
    return entries


def run(capsys, *argv):
    assert main([str(a) for a in argv]) == 0
    return capsys.readouterr().out


def fail(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main([str(a) for a in argv])
    err = capsys.readouterr().err.strip().splitlines()[-1]
    return info.value.code, json.loads(err)


def test_encode_variants(capsys, corpus):
    out = run(capsys, "encode", corpus, "--no-keep-variables", "--no-keep-inverse-roles")
    assert out.splitlines()[0] == CHINA_TRIPLES["X_var_X_invrole"]
    out = run(capsys, "encode", corpus, "--variant", "Triple_O_var_O_invrole")
    assert out.splitlines()[0] == CHINA_TRIPLES["O_var_O_invrole"]
    out = run(capsys, "encode", corpus, "--format", "penman")
    assert out.splitlines()[0].startswith("( p / person :ARG0-of ( b / betray-01")


def test_decode_then_smatch(capsys, corpus, tmp_path):
    lines = tmp_path / "lines.txt"
    run(capsys, "encode", corpus, "-o", lines)
    decoded = tmp_path / "dec.amr"
    run(capsys, "decode", lines, "-o", decoded)
    assert len(read_amr_corpus(open(decoded))) == 2
    out = run(capsys, "smatch", corpus, decoded, "--json", "--per-pair")
    payload = json.loads(out)
    assert payload["f1"] == 1.0 and len(payload["pairs"]) == 2


def test_decode_lenient_keeps_alignment(capsys, corpus, tmp_path):
    lines = tmp_path / "lines.txt"
    lines.write_text(CHINA_TRIPLES["O_var_O_invrole"] + "\na instance\n")
    decoded = tmp_path / "dec.amr"
    run(capsys, "decode", lines, "-o", decoded, "--lenient")
    text = run(capsys, "smatch", corpus, decoded, "--json")
    payload = json.loads(text)
    assert payload["unparseable"] == 1
    assert payload["matched"] == 13


def test_decode_strict_fails(capsys, tmp_path):
    lines = tmp_path / "lines.txt"
    lines.write_text("a instance\n")
    code, err = fail(capsys, "decode", lines)
    assert code == 1 and err["error"] == "CliError" and "line 1" in err["message"]


def test_smatch_hyp_variant_and_text_output(capsys, corpus, tmp_path):
    lines = tmp_path / "lines.txt"
    run(capsys, "encode", corpus, "--variant", "Triple_O_var_X_invrole", "-o", lines)
    out = run(capsys, "smatch", corpus, lines, "--hyp-variant", "Triple_O_var_X_invrole", "--exact-max-vars", "12")
    assert "F-score: 1.0000" in out


@pytest.mark.parametrize("kernel", _backend.available())
def test_smatch_kernel_choice(capsys, corpus, kernel):
    out = run(capsys, "--kernel", kernel, "smatch", corpus, corpus, "--seed", 3, "--restarts", 2)
    assert "F-score: 1.0000" in out


def test_smatch_count_mismatch(capsys, corpus, tmp_path):
    one = tmp_path / "one.amr"
    one.write_text(CHINA_PENMAN + "\n")
    code, err = fail(capsys, "smatch", corpus, one)
    assert code == 1 and err["error"] == "CorpusError"


def test_usage_error(capsys):
    code, err = fail(capsys, "smatch")
    assert code == 2 and err["error"] == "UsageError"


def test_missing_file(capsys, tmp_path):
    code, err = fail(capsys, "encode", tmp_path / "nope.amr")
    assert code == 1 and err["error"] == "FileNotFoundError"


def test_roundtrip_summary(capsys, corpus):
    summary = json.loads(run(capsys, "roundtrip", corpus, "--variant", "Triple_O_var_O_invrole"))
    assert summary == {
        "variant": "Triple_O_var_O_invrole", "entries": 2, "perfect": 2,
        "decode_failures": 0, "shared_concept_graphs": 0, "mean_f1": 1.0,
    }
    free = json.loads(run(capsys, "roundtrip", corpus, "--variant", "Triple_X_var_X_invrole"))
    assert free["perfect"] < 2


def test_prepare_multitask_is_byte_identical(capsys, tmp_path):
    src = tmp_path / "train.amr"
    write_random_corpus(src, 25)
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    run(capsys, "prepare", src, "--multitask", "--seed", 7, "-o", a)
    run(capsys, "prepare", src, "--multitask", "--seed", 7, "-o", b)
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert len(rows) == 50
    assert {r.split("\t")[1] for r in rows} == {"penman", "triple"}


def test_prepare_jsonl(capsys, corpus):
    out = run(capsys, "prepare", corpus, "--jsonl", "--variant", "Penman_X_var_O_invrole")
    records = [json.loads(line) for line in out.splitlines()]
    assert records[0]["source"] == f"penman: {CHINA_SENTENCE}"
    assert records[0]["target"].startswith("( person")


def test_stats_depth_csv(capsys, corpus):
    out = run(capsys, "stats", corpus, corpus, "--by", "depth")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["bucket_key"], r["count"], r["f1"]) for r in rows] == [("2", "1", "1.0000"), ("6", "1", "1.0000")]


def test_stats_buckets_sum_to_corpus(capsys, tmp_path):
    ref, hyp = tmp_path / "ref.amr", tmp_path / "hyp.amr"
    entries = write_random_corpus(ref, 60)
    rng = random.Random(0)
    hyps = []
    for e in entries:
        g = perturb(e.graph, rng)
        # deleting an edge can disconnect a graph, which Penman cannot write
        hyps.append(CorpusEntry.create(g if not validate(g) else e.graph, id=e.id))
    with open(hyp, "w") as fh:
        write_amr_corpus(hyps, fh)
    for by in ("depth", "length"):
        out = run(capsys, "stats", ref, hyp, "--by", by, "--format", "penman", "--bucket-size", 10)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert sum(int(r["count"]) for r in rows) == 60
        assert all(0.0 <= float(r["f1"]) <= 1.0 for r in rows)


def test_stats_table_distances_census(capsys, corpus, tmp_path):
    out = run(capsys, "stats", corpus, corpus, "--by", "length", "--table", "--format", "penman")
    assert out.splitlines()[0].split()[:2] == ["length", "count"]
    out = run(capsys, "stats", corpus, "--distances", "--role-census", "--format", "penman")
    assert "graph,edges,mean_distance,max_distance" in out
    assert "1,13," in out
    assert "# distinct roles: raw=11 normalized=9" in out
    path = tmp_path / "out.csv"
    run(capsys, "stats", corpus, "--distances", "-o", path)
    assert path.read_text().startswith("graph,edges")


def test_stats_by_needs_hypothesis(capsys, corpus):
    code, err = fail(capsys, "stats", corpus, "--by", "depth")
    assert code == 1 and "hypothesis" in err["message"]
