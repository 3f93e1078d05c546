"""Batch analysis over a directory of sources, with labels and metrics.

Ground truth lives in a labels.csv next to the sources: one row per
expected finding (file, contract, function, label, cause), label TP or
FP, cause one of the eight names for FP rows. Files are deduplicated by
token content before analysis so trivially re-uploaded copies do not
skew the counts; among identical files the lexicographically smallest
path is kept, which keeps every downstream number independent of input
order.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, FatalSyntax, UnreadableInput
from .frontend import tokenize
from .frontend.ast_nodes import CALL_KIND_NAMES
from .frontend.tokens import TokenKind
from .pipeline import FileAnalysis, STATUS_OK, analyze_source
from .timing import Deadline
from .triage import CAUSE_NAMES, CauseType, TRIAGE_ORDER


@dataclass(frozen=True)
class LabelRow:
    file: str
    contract: str
    function: str
    label: str  # "TP" | "FP"
    cause: str  # one of CAUSE_NAMES, or "" for TP rows


def load_labels(path: str | Path) -> dict[str, list[LabelRow]]:
    """Parse and validate labels.csv; raises ConfigError on bad rows."""
    rows: dict[str, list[LabelRow]] = {}
    seen: set[tuple[str, str, str]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"file", "contract", "function", "label", "cause"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ConfigError(
                f"labels file needs columns {sorted(required)}, "
                f"got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            label = (row["label"] or "").strip()
            cause = (row["cause"] or "").strip()
            if label not in ("TP", "FP"):
                raise ConfigError(f"{path}:{lineno}: label must be TP or FP, "
                                  f"got {label!r}")
            if label == "FP" and cause not in CAUSE_NAMES:
                raise ConfigError(f"{path}:{lineno}: unknown cause {cause!r}")
            if label == "TP" and cause:
                raise ConfigError(f"{path}:{lineno}: TP rows take no cause")
            key = (row["file"].strip(), row["contract"].strip(),
                   row["function"].strip())
            if key in seen:
                raise ConfigError(f"{path}:{lineno}: duplicate row for {key}")
            seen.add(key)
            rows.setdefault(key[0], []).append(
                LabelRow(key[0], key[1], key[2], label, cause))
    return rows


def token_fingerprint(data: bytes) -> str:
    """Hash of the token stream: whitespace and comments do not count."""
    try:
        tokens, _ = tokenize(data.decode("utf-8"))
    except (UnicodeDecodeError, FatalSyntax, UnreadableInput):
        return "raw:" + hashlib.sha256(data).hexdigest()
    h = hashlib.sha256()
    for tok in tokens:
        if tok.kind is TokenKind.EOF:
            break
        h.update(tok.text.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def dedupe_paths(paths: list[Path]) -> tuple[list[Path], int]:
    """Keep one path per distinct token stream (smallest path wins)."""
    ordered = sorted(dict.fromkeys(paths))
    kept: list[Path] = []
    seen: set[str] = set()
    for p in ordered:
        try:
            fp = token_fingerprint(p.read_bytes())
        except OSError:
            kept.append(p)  # unreadable; let analysis report it
            continue
        if fp in seen:
            continue
        seen.add(fp)
        kept.append(p)
    return kept, len(ordered) - len(kept)


@dataclass
class Metrics:
    total_files: int = 0
    duplicate_files: int = 0
    analyzed_count: int = 0
    failed_count: int = 0
    candidate_count: int = 0
    reported_count: int = 0
    suppressed_count: int = 0
    tp_count: int = 0
    precision: float | None = None
    reported_rate: float | None = None
    cause_counts: dict[str, int] = field(
        default_factory=lambda: {name: 0 for name in CAUSE_NAMES})

    def as_dict(self) -> dict:
        return {
            "total_files": self.total_files,
            "duplicate_files": self.duplicate_files,
            "analyzed_count": self.analyzed_count,
            "failed_count": self.failed_count,
            "candidate_count": self.candidate_count,
            "reported_count": self.reported_count,
            "suppressed_count": self.suppressed_count,
            "tp_count": self.tp_count,
            "precision": self.precision,
            "reported_rate": self.reported_rate,
            "cause_counts": dict(self.cause_counts),
        }


@dataclass
class BatchResult:
    records: list[FileAnalysis]
    metrics: Metrics


def _is_true_positive(verdict, labels_for_file: list[LabelRow]) -> bool:
    finding = verdict.finding
    for row in labels_for_file:
        if row.label != "TP":
            continue
        if row.contract and row.contract != finding.contract:
            continue
        if row.function and row.function != finding.function:
            continue
        return True
    return False


def run_batch(paths: list[Path], labels: dict[str, list[LabelRow]] | None = None,
              *, rules: tuple[CauseType, ...] = TRIAGE_ORDER,
              call_kinds: frozenset[str] = frozenset(CALL_KIND_NAMES),
              report_bare: bool = True, timeout_seconds: float | None = None,
              max_source_bytes: int | None = None,
              dedupe: bool = True) -> BatchResult:
    ordered = sorted(dict.fromkeys(paths))
    duplicates = 0
    if dedupe:
        ordered, duplicates = dedupe_paths(ordered)

    records: list[FileAnalysis] = []
    for path in ordered:
        deadline = Deadline(timeout_seconds) if timeout_seconds else \
            Deadline.unlimited()
        kwargs: dict = dict(rules=rules, call_kinds=call_kinds,
                            report_bare=report_bare, deadline=deadline)
        if max_source_bytes is not None:
            kwargs["max_source_bytes"] = max_source_bytes
        records.append(analyze_source(str(path), **kwargs))

    m = Metrics(total_files=len(ordered) + duplicates,
                duplicate_files=duplicates)
    files_with_report = 0
    for rec in records:
        if rec.status != STATUS_OK:
            m.failed_count += 1
            continue
        m.analyzed_count += 1
        m.candidate_count += rec.candidate_count
        reported = rec.reported
        m.reported_count += len(reported)
        m.suppressed_count += rec.candidate_count - len(reported)
        if reported:
            files_with_report += 1
        for verdict in rec.verdicts:
            for cause in verdict.causes:
                m.cause_counts[cause.value] += 1
        if labels is not None:
            rows = labels.get(Path(rec.path).name, [])
            for verdict in reported:
                if _is_true_positive(verdict, rows):
                    m.tp_count += 1
    if labels is not None and m.reported_count:
        m.precision = m.tp_count / m.reported_count
    if m.analyzed_count:
        m.reported_rate = files_with_report / m.analyzed_count
    return BatchResult(records, m)
