"""Report JSON must be byte-stable; text rendering smoke-checked."""

import json
import random

import pytest

from corpus_fixtures import build_corpus
from reentriage.corpus import load_labels, run_batch
from reentriage.report import (
    SCHEMA_VERSION, build_report, render_text, report_json, utc_timestamp,
)
from reentriage.triage import TRIAGE_ORDER


@pytest.fixture(scope="module")
def corpus_root(tmp_path_factory):
    return build_corpus(tmp_path_factory.mktemp("corpus"))


def report_for(root, paths) -> str:
    labels = load_labels(root / "labels.csv")
    batch = run_batch(paths, labels)
    return report_json(build_report(batch, TRIAGE_ORDER))


def test_timestamp_honors_source_date_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    assert utc_timestamp() == "2023-11-14T22:13:20Z"


def test_json_identical_under_input_shuffle(corpus_root, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    paths = sorted(corpus_root.glob("*.sol"))
    baseline = report_for(corpus_root, list(paths))
    for seed in range(3):
        shuffled = list(paths)
        random.Random(seed).shuffle(shuffled)
        assert report_for(corpus_root, shuffled) == baseline


def test_json_shape(corpus_root, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    labels = load_labels(corpus_root / "labels.csv")
    batch = run_batch(sorted(corpus_root.glob("*.sol")), labels)
    report = build_report(batch, TRIAGE_ORDER)
    assert list(report) == ["schema_version", "tool", "generated_at",
                            "rules_enabled", "metrics", "files"]
    assert report["schema_version"] == SCHEMA_VERSION
    assert report["rules_enabled"] == [c.value for c in TRIAGE_ORDER]
    assert [f["path"] for f in report["files"]] == \
        sorted(f["path"] for f in report["files"])

    parsed = json.loads(report_json(report))
    assert parsed == report

    for file_obj in report["files"]:
        if file_obj["status"] != "ok":
            assert "error" in file_obj
            continue
        for finding in file_obj["findings"]:
            assert list(finding)[:4] == ["id", "contract", "function",
                                         "variant"]
            for cause in finding["causes"]:
                assert cause["spans"], finding["id"]
            assert len(finding["rule_trace"]) == len(TRIAGE_ORDER)


def test_text_rendering_mentions_key_numbers(corpus_root, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    labels = load_labels(corpus_root / "labels.csv")
    batch = run_batch(sorted(corpus_root.glob("*.sol")), labels)
    text = render_text(build_report(batch, TRIAGE_ORDER))
    assert "precision      1.0000" in text
    assert "REPORT" in text and "  ok  " in text
    assert "broken.sol: parse_error" in text
    assert text.count("REPORT") == 2
