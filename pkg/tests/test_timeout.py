"""A file that blows its time budget fails alone; the batch keeps going."""

import time

from slowcase import FAST_SHAPE, pathological
from reentriage.pipeline import analyze_source
from reentriage.timing import Deadline


def test_deadline_interrupts_analysis():
    text = pathological(*FAST_SHAPE).encode()

    start = time.monotonic()
    untimed = analyze_source("heavy.sol", text)
    full_cost = time.monotonic() - start
    assert untimed.status == "ok"

    budget = min(0.25, full_cost / 4)
    rec = analyze_source("heavy.sol", text, deadline=Deadline(budget))
    assert rec.status == "timeout"
    assert "budget" in rec.error
    assert rec.verdicts == []
    assert rec.elapsed < full_cost / 2


def test_batch_survives_a_timeout(tmp_path):
    (tmp_path / "heavy.sol").write_text(pathological(*FAST_SHAPE))
    (tmp_path / "fine.sol").write_text(
        "contract C { uint x; function f(address a) public "
        '{ a.call.value(1)(""); x = 1; } }\n')

    from reentriage.corpus import run_batch
    batch = run_batch(sorted(tmp_path.glob("*.sol")), timeout_seconds=0.2)
    by_name = {rec.path.rsplit("/", 1)[-1]: rec for rec in batch.records}
    assert by_name["heavy.sol"].status == "timeout"
    assert by_name["fine.sol"].status == "ok"
    assert batch.metrics.failed_count == 1
    assert batch.metrics.analyzed_count == 1
    assert batch.metrics.candidate_count == 1


def test_deadline_covers_lexing_of_huge_inputs():
    # a multi-megabyte token soup must hit a checkpoint inside the lexer
    text = ("uint a = 1; " * 400000).encode()
    start = time.monotonic()
    rec = analyze_source("soup.sol", text, max_source_bytes=len(text) + 1,
                         deadline=Deadline(0.05))
    elapsed = time.monotonic() - start
    assert rec.status == "timeout"
    assert elapsed < 2.0
