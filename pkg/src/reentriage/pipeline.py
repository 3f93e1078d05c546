"""Single-file analysis: parse, flatten, detect, triage.

One entry point, analyze_source, that never raises for input problems:
unreadable bytes, fatal syntax and deadline overruns each come back as a
FileAnalysis with a status and message, so batch callers can keep going.
Programming errors still propagate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .detector import Finding, detect
from .errors import AnalysisTimeout, FatalSyntax, UnreadableInput
from .flow import analyze_contract
from .frontend import DEFAULT_MAX_SOURCE_BYTES, parse_source
from .frontend.ast_nodes import CALL_KIND_NAMES, Diagnostic
from .lowering import linearize
from .timing import Deadline
from .triage import LIKELY_TP, CauseType, TRIAGE_ORDER, Verdict, triage

STATUS_OK = "ok"
STATUS_UNREADABLE = "unreadable"
STATUS_PARSE_ERROR = "parse_error"
STATUS_TIMEOUT = "timeout"


@dataclass
class FileAnalysis:
    path: str
    status: str = STATUS_OK
    error: str = ""
    contracts: list[str] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def candidate_count(self) -> int:
        return len(self.verdicts)

    @property
    def reported(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.classification == LIKELY_TP]


def analyze_source(path: str, data: bytes | None = None, *,
                   rules: tuple[CauseType, ...] = TRIAGE_ORDER,
                   call_kinds: frozenset[str] = frozenset(CALL_KIND_NAMES),
                   report_bare: bool = True,
                   max_source_bytes: int = DEFAULT_MAX_SOURCE_BYTES,
                   deadline: Deadline | None = None) -> FileAnalysis:
    deadline = deadline or Deadline.unlimited()
    started = time.monotonic()
    result = FileAnalysis(path)

    def finish(status: str = STATUS_OK, error: str = "") -> FileAnalysis:
        result.status = status
        result.error = error
        result.elapsed = time.monotonic() - started
        return result

    if data is None:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            return finish(STATUS_UNREADABLE, str(exc))

    try:
        unit = parse_source(data, path, max_source_bytes=max_source_bytes,
                            deadline=deadline)
        contracts = linearize(unit)  # may add inheritance diagnostics
        result.diagnostics.extend(unit.diagnostics)
        for contract in contracts:
            deadline.check()
            result.contracts.append(contract.name)
            result.diagnostics.extend(contract.diagnostics)
            flow = analyze_contract(contract, deadline)
            findings = detect(flow, path, call_kinds=call_kinds,
                              report_bare=report_bare)
            for finding in findings:
                result.verdicts.append(triage(finding, flow, rules))
    except UnreadableInput as exc:
        return finish(STATUS_UNREADABLE, str(exc))
    except FatalSyntax as exc:
        return finish(STATUS_PARSE_ERROR, str(exc))
    except AnalysisTimeout as exc:
        return finish(STATUS_TIMEOUT, str(exc))

    result.verdicts.sort(key=lambda v: (v.finding.line, v.finding.column,
                                        v.finding.contract,
                                        v.finding.function))
    return finish()


def findings_of(analysis: FileAnalysis) -> list[Finding]:
    return [v.finding for v in analysis.verdicts]
