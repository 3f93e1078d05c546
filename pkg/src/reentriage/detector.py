"""Reentrancy candidate detection.

A candidate is any external call site in any function body (constructors
and view functions included; later rules judge those). Two variants:

* cei_violation: some state write can execute after the call returns,
  the classic check-effects-interaction inversion.
* bare_external_call: no write follows, but the call still hands control
  to another contract; reported when configured (default on) because the
  called side may re-enter through other functions.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .flow import CallSite, ContractFlow, StateWrite, writes_after
from .frontend.ast_nodes import CALL_KIND_NAMES, Span
from .frontend.unparse import unparse

VARIANT_CEI = "cei_violation"
VARIANT_BARE = "bare_external_call"


@dataclass
class Finding:
    id: str
    file: str
    contract: str
    function: str
    variant: str  # cei_violation | bare_external_call
    call_kind: str
    line: int
    column: int
    snippet: str
    span: Span
    site: CallSite
    post_writes: list[StateWrite] = field(default_factory=list)


def _finding_id(file: str, contract: str, function: str, span: Span) -> str:
    text = f"{file}:{contract}:{function}:{span.line}:{span.column}"
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def detect(flow: ContractFlow, file: str,
           call_kinds: frozenset[str] = frozenset(CALL_KIND_NAMES),
           report_bare: bool = True) -> list[Finding]:
    """All candidates in one contract, ordered by source position."""
    findings: list[Finding] = []
    for key, fn_flow in flow.functions.items():
        if fn_flow.cfg is None:
            continue
        for site in fn_flow.call_sites:
            if site.kind.value not in call_kinds:
                continue
            include_same = _site_inside_assignment_value(site)
            post = writes_after(fn_flow.cfg, site.block_id, site.stmt_index,
                                fn_flow.writes_by_pos,
                                include_same_stmt=include_same)
            if post:
                variant = VARIANT_CEI
            elif report_bare:
                variant = VARIANT_BARE
            else:
                continue
            findings.append(Finding(
                id=_finding_id(file, flow.contract.name, key, site.span),
                file=file,
                contract=flow.contract.name,
                function=key,
                variant=variant,
                call_kind=site.kind.value,
                line=site.span.line,
                column=site.span.column,
                snippet=unparse(site.call),
                span=site.span,
                site=site,
                post_writes=post,
            ))
    findings.sort(key=lambda f: (f.line, f.column, f.function))
    return findings


def _site_inside_assignment_value(site: CallSite) -> bool:
    """`x = a.call(...)` stores after the call returns; that write counts."""
    from .frontend.ast_nodes import Assignment, walk_expr
    stmt = site.stmt
    if not isinstance(stmt, Assignment) or stmt.value is None:
        return False
    return any(e is site.call for e in walk_expr(stmt.value))
