"""False-positive cause rules and verdict assembly.

Eight independent rules, each a pure predicate over one finding plus the
contract's flow facts. Every match must carry evidence (source spans plus
a one-line explanation); a finding suppressed by at least one rule is
classified likely_false_positive, otherwise likely_true_positive. Rules
never depend on each other or on evaluation order; the verdict keeps the
full trace so a reviewer can see every rule's answer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .detector import Finding
from .flow import (
    ContractFlow, FunctionFlow, Guard, guards_of, value_provenance,
)
from .frontend.ast_nodes import (
    Assignment, Binary, CallKind, Expr, Identifier, IndexAccess, Literal,
    MsgSender, MsgValue, Span, ThisRef, TypeCast, walk_expr,
)
from .frontend.unparse import unparse


class CauseType(Enum):
    IDENTITY_CONTROL = "identity_control"
    ADDRESS_CONTROL = "address_control"
    REENTRANCY_LOCK = "reentrancy_lock"
    NO_STATE_CHANGE = "no_state_change"
    NO_FINANCIAL_RISK = "no_financial_risk"
    SPECIAL_TRANSFER_VALUE = "special_transfer_value"
    GAS_STIPEND_TRANSFER_SEND = "gas_stipend_transfer_send"
    NON_CALLABLE = "non_callable"


CAUSE_NAMES = tuple(c.value for c in CauseType)
TRIAGE_ORDER = tuple(CauseType)

LIKELY_TP = "likely_true_positive"
LIKELY_FP = "likely_false_positive"


@dataclass(frozen=True)
class Evidence:
    spans: tuple[Span, ...]
    detail: str


@dataclass(frozen=True)
class RuleTraceEntry:
    cause: CauseType
    matched: bool
    detail: str


@dataclass
class Verdict:
    finding: Finding
    classification: str
    causes: dict[CauseType, Evidence] = field(default_factory=dict)
    rule_trace: list[RuleTraceEntry] = field(default_factory=list)


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _peel_cast(expr: Expr) -> Expr:
    while isinstance(expr, TypeCast):
        expr = expr.operand
    return expr


def _fn_flow(finding: Finding, flow: ContractFlow) -> FunctionFlow:
    return flow.functions[finding.function]


def _site_guards(finding: Finding, flow: ContractFlow) -> list[Guard]:
    fn_flow = _fn_flow(finding, flow)
    if fn_flow.cfg is None:
        return []
    return guards_of(fn_flow.cfg, finding.site.block_id,
                     finding.site.stmt_index)


def _is_address_state_var(name: str, flow: ContractFlow) -> bool:
    var = flow.contract.state_var(name)
    return var is not None and var.type_text.split()[0].split("[")[0] == "address"


_ADDRESS_MAPPING_RE = re.compile(r"^mapping\s*\(\s*address\b")


def _is_address_keyed_mapping(name: str, flow: ContractFlow) -> bool:
    var = flow.contract.state_var(name)
    return var is not None and bool(_ADDRESS_MAPPING_RE.match(var.type_text))


def _value_is_zero(expr: Expr | None) -> bool:
    if expr is None:
        return True
    expr = _peel_cast(expr)
    return isinstance(expr, Literal) and expr.is_zero()


def _sends_ether(site) -> bool:
    value = site.call.value_slot
    if site.kind in (CallKind.TRANSFER, CallKind.SEND):
        return not _value_is_zero(value)
    return value is not None and not _value_is_zero(value)


def _positions_after(fn_flow: FunctionFlow, block_id: int, stmt_index: int):
    """Predicate for 'strictly after this position on some path', with the
    same one-unroll cycle semantics writes_after uses."""
    cfg = fn_flow.cfg
    forward = cfg.reachable_from(block_id)
    in_cycle = block_id in forward

    def after(b: int, idx: int) -> bool:
        if b == block_id:
            if idx > stmt_index:
                return True
            return in_cycle
        return b in forward
    return after


def _iter_positions(fn_flow: FunctionFlow):
    """(block_id, idx, stmt) triples across the function."""
    for block in fn_flow.cfg.blocks.values():
        for idx, stmt in enumerate(block.statements):
            yield block.id, idx, stmt


def _guard_read_names(guard: Guard) -> set[str]:
    return {e.name for e in walk_expr(guard.condition)
            if isinstance(e, Identifier)}


def _ether_outflow_guard_reads(flow: ContractFlow) -> set[str]:
    """Names read by guards that dominate some ether outflow, contract-wide.

    These variables plausibly gate money movement; writing them after an
    external call is financially meaningful."""
    names: set[str] = set()
    for fn_flow in flow.functions.values():
        if fn_flow.cfg is None:
            continue
        for site in fn_flow.call_sites:
            if not _sends_ether(site):
                continue
            for g in guards_of(fn_flow.cfg, site.block_id, site.stmt_index):
                names |= _guard_read_names(g)
    return names


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------

def rule_identity_control(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """Caller identity is checked against trusted storage before the call."""
    for guard in _site_guards(finding, flow):
        cond = guard.condition
        if not guard.negated and isinstance(cond, Binary) \
                and cond.op in ("==", "!="):
            sides = (cond.left, cond.right)
            for a, b in (sides, sides[::-1]):
                if isinstance(_peel_cast(a), MsgSender):
                    other = _peel_cast(b)
                    if isinstance(other, Identifier) and \
                            _is_address_state_var(other.name, flow):
                        return Evidence(
                            (guard.span,),
                            f"caller gated by '{unparse(cond)}' "
                            f"({guard.source})")
        membership = cond
        if isinstance(membership, IndexAccess):
            base = _peel_cast(membership.base)
            while isinstance(base, IndexAccess):
                base = _peel_cast(base.base)
            index_has_sender = membership.index is not None and any(
                isinstance(e, MsgSender) for e in walk_expr(membership.index))
            if isinstance(base, Identifier) and index_has_sender and \
                    _is_address_keyed_mapping(base.name, flow):
                polarity = "excluded from" if guard.negated else "required in"
                return Evidence(
                    (guard.span,),
                    f"caller {polarity} mapping '{base.name}' ({guard.source})")
    return None


def rule_address_control(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """The callee address cannot be chosen by an attacker."""
    target = finding.site.target
    if target is None:
        return None
    fn_flow = _fn_flow(finding, flow)
    guards = _site_guards(finding, flow)
    provenance = value_provenance(target, flow.contract, fn_flow.function,
                                  guards, flow.vars_written_outside_ctor)
    if provenance in ("hardcoded_constant", "state_var_fixed"):
        spans = [finding.site.span]
        peeled = _peel_cast(target)
        if isinstance(peeled, Identifier):
            var = flow.contract.state_var(peeled.name)
            if var is not None:
                spans.append(var.span)
        return Evidence(tuple(spans),
                        f"call target '{unparse(target)}' is {provenance}")
    return None


def rule_reentrancy_lock(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """A boolean latch is checked, flipped before the call, restored after."""
    fn_flow = _fn_flow(finding, flow)
    if fn_flow.cfg is None:
        return None
    cfg = fn_flow.cfg
    doms = cfg.dominators()
    site_b, site_i = finding.site.block_id, finding.site.stmt_index
    after = _positions_after(fn_flow, site_b, site_i)

    for guard in _site_guards(finding, flow):
        if guard.source != "require":
            continue
        cond = guard.condition
        if not isinstance(cond, Identifier):
            continue
        var = flow.contract.state_var(cond.name)
        if var is None or var.type_text.split()[0] != "bool":
            continue
        # require(flag): blocked state is false; require(!flag): true
        blocking = "false" if not guard.negated else "true"
        restoring = "true" if not guard.negated else "false"
        block_span = restore_span = None
        for b, idx, stmt in _iter_positions(fn_flow):
            if not isinstance(stmt, Assignment) or stmt.op != "=":
                continue
            tgt = stmt.target
            if not (isinstance(tgt, Identifier) and tgt.name == cond.name):
                continue
            val = stmt.value
            if not (isinstance(val, Literal) and val.kind == "bool"):
                continue
            dominates_site = (
                (b == site_b and idx < site_i)
                or (b != site_b and b in doms.get(site_b, set())))
            if val.text == blocking and dominates_site and block_span is None:
                block_span = stmt.span
            if val.text == restoring and after(b, idx) and restore_span is None:
                restore_span = stmt.span
        if block_span is not None and restore_span is not None:
            return Evidence(
                (guard.span, block_span, restore_span),
                f"lock '{cond.name}' checked, engaged before the call, "
                f"released after")
    return None


def rule_no_state_change(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """Nothing observable changes after the call and no ether can follow."""
    if finding.post_writes:
        return None
    if not _value_is_zero(finding.site.call.value_slot):
        return None
    fn_flow = _fn_flow(finding, flow)
    after = _positions_after(fn_flow, finding.site.block_id,
                             finding.site.stmt_index)
    for other in fn_flow.call_sites:
        if other.call is finding.site.call:
            continue
        if _sends_ether(other) and after(other.block_id, other.stmt_index):
            return None
    return Evidence((finding.site.span,),
                    "no state write after the call and no ether leaves")


def rule_no_financial_risk(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """Even if re-entered, no value can be extracted through this path."""
    call = finding.site.call
    args = [_peel_cast(a) for a in call.args]
    inbound_shape = (len(args) >= 2 and isinstance(args[0], MsgSender)
                     and isinstance(args[1], ThisRef))
    fn_flow = _fn_flow(finding, flow)
    fn_sends_ether = any(_sends_ether(s) for s in fn_flow.call_sites)
    value_free = _value_is_zero(call.value_slot) and not fn_sends_ether
    if not (inbound_shape or value_free):
        return None
    gate_reads = _ether_outflow_guard_reads(flow)
    for write in finding.post_writes:
        if write.var == "?" or write.var in gate_reads:
            return None  # the write could influence a money-moving check
    detail = ("tokens flow into this contract (from msg.sender to this)"
              if inbound_shape else
              "call moves no ether and later writes gate no ether outflow")
    return Evidence((finding.site.span,), detail)


def rule_special_transfer_value(finding: Finding,
                                flow: ContractFlow) -> Evidence | None:
    """Forwarded amount equals msg.value: a reentrant call costs the
    attacker the same amount again, so draining is impossible."""
    value = finding.site.call.value_slot
    if value is None:
        return None
    fn_flow = _fn_flow(finding, flow)
    guards = _site_guards(finding, flow)
    provenance = value_provenance(value, flow.contract, fn_flow.function,
                                  guards, flow.vars_written_outside_ctor)
    if provenance != "msg_value":
        return None
    spans = [value.span if value.span.end_offset else finding.site.span]
    for g in guards:
        if isinstance(g.condition, Binary) and any(
                isinstance(e, MsgValue) for e in walk_expr(g.condition)):
            spans.append(g.span)
            break
    return Evidence(tuple(spans), "forwarded amount is msg.value")


def rule_gas_stipend_transfer_send(finding: Finding,
                                   flow: ContractFlow) -> Evidence | None:
    """transfer/send forward 2300 gas: enough to log, not to re-enter."""
    if finding.site.kind not in (CallKind.TRANSFER, CallKind.SEND):
        return None
    if finding.site.call.gas_slot is not None:
        return None
    return Evidence((finding.site.span,),
                    f"{finding.site.kind.value} forwards only the 2300 gas "
                    f"stipend")


def rule_non_callable(finding: Finding, flow: ContractFlow) -> Evidence | None:
    """No outside account can ever execute this code path."""
    fn_flow = _fn_flow(finding, flow)
    fn = fn_flow.function
    if fn.is_constructor:
        return Evidence((fn.span,), "constructor runs once at deployment")
    if fn_flow.key not in flow.externally_reachable_keys:
        return Evidence(
            (fn.span,),
            f"{fn.visibility} function never reached from a public or "
            f"external entry point")
    return None


RULES: dict[CauseType, object] = {
    CauseType.IDENTITY_CONTROL: rule_identity_control,
    CauseType.ADDRESS_CONTROL: rule_address_control,
    CauseType.REENTRANCY_LOCK: rule_reentrancy_lock,
    CauseType.NO_STATE_CHANGE: rule_no_state_change,
    CauseType.NO_FINANCIAL_RISK: rule_no_financial_risk,
    CauseType.SPECIAL_TRANSFER_VALUE: rule_special_transfer_value,
    CauseType.GAS_STIPEND_TRANSFER_SEND: rule_gas_stipend_transfer_send,
    CauseType.NON_CALLABLE: rule_non_callable,
}


def triage(finding: Finding, flow: ContractFlow,
           rules: tuple[CauseType, ...] = TRIAGE_ORDER) -> Verdict:
    """Run the enabled rules over one finding; any match suppresses it."""
    causes: dict[CauseType, Evidence] = {}
    trace: list[RuleTraceEntry] = []
    for cause in TRIAGE_ORDER:
        if cause not in rules:
            continue
        evidence = RULES[cause](finding, flow)
        if evidence is not None:
            if not evidence.spans:
                raise AssertionError(
                    f"rule {cause.value} matched without evidence")
            causes[cause] = evidence
            trace.append(RuleTraceEntry(cause, True, evidence.detail))
        else:
            trace.append(RuleTraceEntry(cause, False, ""))
    classification = LIKELY_FP if causes else LIKELY_TP
    return Verdict(finding, classification, causes, trace)
