"""Wire types for the HTTP service (pydantic v2)."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from .config import DEFAULT_TIMEOUT_SECONDS


class AnalyzeRequest(BaseModel):
    source: str = Field(description="Solidity source text")
    path: str = Field(default="<request>",
                      description="display name for the source")
    rules: Optional[str] = Field(
        default=None,
        description="comma separated cause names; omit for all, "
                    "empty string for none")
    call_kinds: Optional[str] = Field(
        default=None, description="comma separated call kinds to consider")
    report_bare: bool = True
    timeout_seconds: Optional[float] = DEFAULT_TIMEOUT_SECONDS


class SpanOut(BaseModel):
    line: int
    column: int


class CauseOut(BaseModel):
    cause: str
    detail: str
    spans: list[SpanOut]


class TraceEntryOut(BaseModel):
    cause: str
    matched: bool
    detail: str = ""


class FindingOut(BaseModel):
    id: str
    contract: str
    function: str
    variant: str
    call_kind: str
    line: int
    column: int
    snippet: str
    classification: str
    causes: list[CauseOut]
    rule_trace: list[TraceEntryOut]


class FileResultOut(BaseModel):
    path: str
    status: str
    error: str = ""
    contracts: list[str]
    candidate_count: int
    reported_count: int
    findings: list[FindingOut]


class AnalyzeResponse(BaseModel):
    rules_enabled: list[str]
    file: FileResultOut


class BenchRequest(BaseModel):
    corpus_dir: Optional[str] = Field(
        default=None, description="directory of .sol files plus labels.csv; "
                                  "omit for the bundled samples")
    rules: Optional[str] = None
    call_kinds: Optional[str] = None
    report_bare: bool = True
    timeout_seconds: Optional[float] = DEFAULT_TIMEOUT_SECONDS
    dedupe: bool = True


class ToolOut(BaseModel):
    name: str
    version: str


class BenchResponse(BaseModel):
    schema_version: int
    tool: ToolOut
    generated_at: str
    rules_enabled: list[str]
    metrics: dict
    files: list[FileResultOut]


class HealthResponse(BaseModel):
    status: str
    version: str
