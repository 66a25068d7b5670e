"""Command-line behavior: exit codes, manifests, determinism, and the
wiring between subcommands and the library."""

from __future__ import annotations

import hashlib
import json

import pytest

from laug.cli import main, split_quota, task_rng
from laug.corpus import extract_lu_examples, load_corpus
from laug.records import METHODS, records_from_corpus
from laug.resources import data_path

MINI = str(data_path("mini_corpus.json"))
FIXTURE = str(data_path("fixture_corpus.json"))


def run(*argv: str) -> int:
    return main(list(argv))


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ------------------------------------------------------------ augment ----

def test_augment_writes_corpus_and_manifest(tmp_path):
    out = tmp_path / "wp.json"
    assert run("augment", "--in", MINI, "--out", str(out), "--method",
               "wp", "--seed", "3") == 0
    c = load_corpus(out, strict=True)
    recs = records_from_corpus(c)
    assert recs and all(r.method == "wp" for r in recs)

    manifest = read_json(str(out) + ".manifest.json")
    assert manifest["command"] == "augment"
    assert manifest["seed"] == 3
    assert manifest["config"]["method"] == "wp"
    with open(out, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    assert manifest["outputs"][str(out)] == digest
    with open(MINI, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    assert manifest["inputs"][MINI] == digest
    assert manifest["counts"]["records"] == len(recs)


def test_augment_deterministic_per_seed(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    assert run("augment", "--in", MINI, "--out", str(a), "--method", "sd",
               "--seed", "11") == 0
    assert run("augment", "--in", MINI, "--out", str(b), "--method", "sd",
               "--seed", "11") == 0
    assert run("augment", "--in", MINI, "--out", str(c), "--method", "sd",
               "--seed", "12") == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_augment_manifest_config_hash_stable(tmp_path):
    out = tmp_path / "wp.json"
    argv = ("augment", "--in", MINI, "--out", str(out), "--method", "wp")
    assert run(*argv) == 0
    first = read_json(str(out) + ".manifest.json")["config_hash"]
    assert run(*argv) == 0
    assert read_json(str(out) + ".manifest.json")["config_hash"] == first


def test_augment_every_method_offline(tmp_path):
    for method in METHODS:
        out = tmp_path / f"{method}.json"
        assert run("augment", "--in", MINI, "--out", str(out), "--method",
                   method) == 0
        assert records_from_corpus(load_corpus(out, strict=True))


def test_augment_test_split(tmp_path):
    out = tmp_path / "t.json"
    assert run("augment", "--in", MINI, "--out", str(out), "--method",
               "sd", "--split", "test") == 0
    c = load_corpus(out, strict=True)
    assert {d.meta["source"][0] for d in c.dialogs} == {"mini-005"}


# ------------------------------------------------------------ compose ----

def test_compose_counts_and_split(tmp_path):
    out = tmp_path / "mix.json"
    assert run("compose", "--in", MINI, "--out", str(out), "--ratio",
               "1.0", "--seed", "7") == 0
    c = load_corpus(out, strict=True)
    originals = [d for d in c.dialogs if d.meta is None]
    records = [d for d in c.dialogs if d.meta is not None]
    # 6 train user turns at ratio 1.0 -> 6 records over 4 methods
    assert len(originals) == 3
    assert len(records) == 6
    per_method = read_json(str(out) + ".manifest.json")["counts"][
        "per_method"]
    assert sorted(per_method.values()) == [1, 1, 2, 2]


def test_compose_methods_subset(tmp_path):
    out = tmp_path / "mix.json"
    assert run("compose", "--in", MINI, "--out", str(out), "--ratio",
               "2.0", "--methods", "sd") == 0
    c = load_corpus(out, strict=True)
    records = [d for d in c.dialogs if d.meta is not None]
    assert len(records) == 12
    assert all(d.meta["method"] == "sd" for d in records)


def test_split_quota_balanced():
    assert split_quota(6, 4) == [2, 2, 1, 1]
    assert split_quota(140, 4) == [35, 35, 35, 35]
    assert split_quota(3, 4) == [1, 1, 1, 0]
    assert max(split_quota(17, 4)) - min(split_quota(17, 4)) <= 1


def test_compose_rejects_unknown_method(tmp_path):
    assert run("compose", "--in", MINI, "--out",
               str(tmp_path / "x.json"), "--ratio", "1.0", "--methods",
               "wp,bogus") == 2


def test_compose_rejects_nonpositive_ratio(tmp_path):
    assert run("compose", "--in", MINI, "--out",
               str(tmp_path / "x.json"), "--ratio", "0") == 2


# ------------------------------------------------------- error paths ----

def test_missing_input_is_io_error(tmp_path):
    assert run("augment", "--in", str(tmp_path / "ghost.json"), "--out",
               str(tmp_path / "x.json"), "--method", "wp") == 3


def test_corrupt_json_is_validation_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run("augment", "--in", str(bad), "--out",
               str(tmp_path / "x.json"), "--method", "wp") == 2


def test_strict_rejects_quarantinable_corpus(tmp_path):
    doc = {"dialogs": [{
        "id": "d1", "split": "train", "turns": [
            {"speaker": "user", "text": "hello there",
             "da": [{"domain": "train", "intent": "inform",
                     "slot": "dest", "value": "Cambridge"}],
             "spans": [{"item": 0, "start": 0, "end": 5}]}]}]}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    out = str(tmp_path / "x.json")
    assert run("augment", "--in", str(path), "--out", out, "--method",
               "sd", "--strict") == 2
    # without --strict the offending dialog is quarantined and the run
    # succeeds with nothing to perturb
    assert run("augment", "--in", str(path), "--out", out, "--method",
               "sd") == 0
    assert records_from_corpus(load_corpus(out)) == []


def test_dead_paraphrase_endpoint_fails_run(tmp_path):
    assert run("augment", "--in", MINI, "--out",
               str(tmp_path / "x.json"), "--method", "tp",
               "--tp-endpoint", "http://127.0.0.1:9/para") == 2


def test_endpoint_env_variable_is_picked_up(tmp_path, monkeypatch):
    monkeypatch.setenv("LAUG_TP_ENDPOINT", "http://127.0.0.1:9/para")
    assert run("augment", "--in", MINI, "--out",
               str(tmp_path / "x.json"), "--method", "tp") == 2
    monkeypatch.delenv("LAUG_TP_ENDPOINT")
    assert run("augment", "--in", MINI, "--out",
               str(tmp_path / "x.json"), "--method", "tp") == 0


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("laug ")


# ------------------------------------------------------ stats + eval ----

def test_stats_reports_per_method(tmp_path, capsys):
    aug = tmp_path / "sd.json"
    assert run("augment", "--in", MINI, "--out", str(aug), "--method",
               "sd") == 0
    out = tmp_path / "stats.json"
    assert run("stats", "--in", MINI, "--aug", str(aug), "--out",
               str(out)) == 0
    payload = read_json(out)
    assert set(payload) == {"overall", "per_method", "records"}
    assert "sd" in payload["per_method"]
    assert payload["per_method"]["sd"]["slot_rate"] == 0.0
    table = capsys.readouterr().out
    assert "sd" in table and "char%" in table


def test_stats_rejects_plain_corpus(tmp_path):
    assert run("stats", "--in", MINI, "--aug", MINI, "--out",
               str(tmp_path / "x.json")) == 2


def gold_predictions(split="test"):
    c = load_corpus(MINI, strict=True)
    examples = extract_lu_examples(c, m=2, split=split)
    return [[{"domain": it.domain, "intent": it.intent, "slot": it.slot,
              "value": it.value} for it in ex.gold] for ex in examples]


def test_eval_scores_gold_predictions_at_one(tmp_path):
    preds = tmp_path / "preds.json"
    preds.write_text(json.dumps(gold_predictions()), encoding="utf-8")
    out = tmp_path / "eval.json"
    assert run("eval", "--in", MINI, "--predictions", str(preds), "--out",
               str(out)) == 0
    assert read_json(out)["f1"]["f1"] == 1.0


def test_eval_accepts_wrapped_predictions(tmp_path):
    preds = tmp_path / "preds.json"
    preds.write_text(json.dumps({"predictions": gold_predictions()}),
                     encoding="utf-8")
    out = tmp_path / "eval.json"
    assert run("eval", "--in", MINI, "--predictions", str(preds), "--out",
               str(out)) == 0
    assert read_json(out)["f1"]["recall"] == 1.0


def test_eval_length_mismatch(tmp_path):
    preds = tmp_path / "preds.json"
    preds.write_text("[]", encoding="utf-8")
    assert run("eval", "--in", MINI, "--predictions", str(preds), "--out",
               str(tmp_path / "x.json")) == 2


# ----------------------------------------------------------- baseline ----

def test_baseline_scores_original_and_methods(tmp_path):
    out = tmp_path / "baseline.json"
    assert run("baseline", "--in", FIXTURE, "--out", str(out), "--seed",
               "5") == 0
    scores = read_json(out)["f1"]
    assert set(scores) == {"ori", *METHODS}
    assert scores["ori"]["f1"] == 1.0
    for method in METHODS:
        assert scores[method]["f1"] <= 1.0


# ------------------------------------------------------------- seeding ----

def test_task_rng_streams_are_independent():
    a = task_rng(1, "wp", "d1", 0)
    b = task_rng(1, "wp", "d1", 1)
    c = task_rng(1, "sr", "d1", 0)
    d = task_rng(1, "wp", "d1", 0, occurrence=1)
    e = task_rng(1, "wp", "d1", 0)
    seq = [r.random() for r in (a, b, c, d)]
    assert len(set(seq)) == 4
    assert e.random() == seq[0]
