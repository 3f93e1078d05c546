"""Report assembly: one JSON document per run, plus a text rendering.

The JSON is fully deterministic for a given corpus and configuration:
files sorted by path, findings by position, fixed key order, and a
timestamp that honors SOURCE_DATE_EPOCH so archived runs can be compared
byte for byte.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone

from . import __version__
from .corpus import BatchResult
from .pipeline import FileAnalysis
from .triage import CauseType, Verdict

SCHEMA_VERSION = 1


def utc_timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.replace(microsecond=0).isoformat().replace("+00:00", "Z")


def _span_obj(span) -> dict:
    return {"line": span.line, "column": span.column}


def _verdict_obj(verdict: Verdict) -> dict:
    f = verdict.finding
    return {
        "id": f.id,
        "contract": f.contract,
        "function": f.function,
        "variant": f.variant,
        "call_kind": f.call_kind,
        "line": f.line,
        "column": f.column,
        "snippet": f.snippet,
        "classification": verdict.classification,
        "causes": [
            {
                "cause": cause.value,
                "detail": evidence.detail,
                "spans": [_span_obj(s) for s in evidence.spans],
            }
            for cause, evidence in verdict.causes.items()
        ],
        "rule_trace": [
            {"cause": entry.cause.value, "matched": entry.matched,
             **({"detail": entry.detail} if entry.matched else {})}
            for entry in verdict.rule_trace
        ],
    }


def file_result_obj(rec: FileAnalysis) -> dict:
    return {
        "path": rec.path,
        "status": rec.status,
        **({"error": rec.error} if rec.error else {}),
        "contracts": rec.contracts,
        "candidate_count": rec.candidate_count,
        "reported_count": len(rec.reported),
        "findings": [_verdict_obj(v) for v in rec.verdicts],
    }


def build_report(batch: BatchResult,
                 rules: tuple[CauseType, ...]) -> dict:
    records = sorted(batch.records, key=lambda r: r.path)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "reentriage", "version": __version__},
        "generated_at": utc_timestamp(),
        "rules_enabled": [c.value for c in rules],
        "metrics": batch.metrics.as_dict(),
        "files": [file_result_obj(r) for r in records],
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _ratio(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def _finding_line(path: str, finding: dict) -> str:
    mark = ("REPORT" if finding["classification"] == "likely_true_positive"
            else "  ok  ")
    causes = ",".join(c["cause"] for c in finding["causes"])
    return (f"{mark} {path}:{finding['line']} "
            f"{finding['contract']}.{finding['function']} "
            f"{finding['call_kind']}"
            + (f" [{causes}]" if causes else ""))


def render_single(payload: dict) -> str:
    """Text for one /analyze response."""
    file_obj = payload["file"]
    lines = []
    if file_obj["status"] != "ok":
        lines.append(f"{file_obj['path']}: {file_obj['status']}"
                     + (f" ({file_obj.get('error', '')})"
                        if file_obj.get("error") else ""))
    else:
        for finding in file_obj["findings"]:
            lines.append(_finding_line(file_obj["path"], finding))
        reported = file_obj["reported_count"]
        total = file_obj["candidate_count"]
        lines.append(f"{total} candidate(s), {reported} reported, "
                     f"{total - reported} suppressed")
    lines.append("")
    return "\n".join(lines)


def render_text(report: dict) -> str:
    m = report["metrics"]
    lines = [
        f"reentriage {report['tool']['version']}  "
        f"({report['generated_at']})",
        "",
        f"files          {m['total_files']:>6}   "
        f"(duplicates skipped: {m['duplicate_files']})",
        f"analyzed       {m['analyzed_count']:>6}   "
        f"failed: {m['failed_count']}",
        f"candidates     {m['candidate_count']:>6}",
        f"reported       {m['reported_count']:>6}   "
        f"suppressed: {m['suppressed_count']}",
        f"precision      {_ratio(m['precision']):>6}",
        f"reported rate  {_ratio(m['reported_rate']):>6}",
        "",
        "suppression causes",
    ]
    for cause, count in m["cause_counts"].items():
        lines.append(f"  {cause:<28} {count:>4}")
    lines.append("")
    for file_obj in report["files"]:
        if file_obj["status"] != "ok":
            lines.append(f"{file_obj['path']}: {file_obj['status']}"
                         + (f" ({file_obj.get('error', '')})"
                            if file_obj.get("error") else ""))
            continue
        for finding in file_obj["findings"]:
            lines.append(_finding_line(file_obj["path"], finding))
    lines.append("")
    return "\n".join(lines)
