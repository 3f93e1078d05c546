"""Intra-procedural control flow and the queries the triage rules need.

The CFG is statement-granular: straight-line statements share a block,
branch/loop conditions terminate their block, `require` does NOT split
blocks (a failed require reverts the whole transaction, so for
reachability it is a straight-line statement). Returns edge to the exit
block; revert/throw statements have no successors.

Queries are defined over block reachability and dominators:

* writes_after: state writes on some path strictly after a call site,
  with one-loop-unroll semantics (a site inside a cycle sees the whole
  cycle's writes, its own block included).
* guards_of: conditions that every path from entry to the site has
  checked, from dominating requires and from dominating branches whose
  polarity is forced (removing the taken edge disconnects the site).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .frontend.ast_nodes import (
    Assignment, Binary, Block, BreakStmt, Call, CallKind, ContinueStmt,
    Expr, EXTERNAL_CALL_KINDS, ForStmt, Identifier, IfStmt, IndexAccess,
    Literal, LocalVarDecl, MemberAccess, MsgSender, MsgValue, OpaqueStmt,
    RequireStmt, ReturnStmt, RevertStmt, Span, StateVarDef, Stmt, ThisRef,
    TypeCast, Unary, WhileStmt, stmt_exprs, walk_expr, walk_stmts,
)
from .frontend.unparse import unparse
from .lowering import FlatContract, FlatFunction
from .timing import Deadline


@dataclass
class BasicBlock:
    id: int
    statements: list[Stmt] = field(default_factory=list)
    condition: Optional[Expr] = None  # branch terminator


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: str  # "seq" | "true" | "false" | "loop_back"


class Cfg:
    def __init__(self, blocks: dict[int, BasicBlock], edges: list[Edge],
                 entry_id: int, exit_id: int):
        self.blocks = blocks
        self.edges = edges
        self.entry_id = entry_id
        self.exit_id = exit_id
        self.stmt_pos: dict[int, tuple[int, int]] = {}  # id(stmt) -> (block, idx)
        self._succs: dict[int, list[Edge]] = {b: [] for b in blocks}
        self._preds: dict[int, list[Edge]] = {b: [] for b in blocks}
        for e in edges:
            self._succs[e.src].append(e)
            self._preds[e.dst].append(e)
        self.reachable = self._compute_reachable()
        self._dominators: dict[int, set[int]] | None = None

    def successors(self, block_id: int) -> list[Edge]:
        return self._succs[block_id]

    def predecessors(self, block_id: int) -> list[Edge]:
        return self._preds[block_id]

    def _compute_reachable(self, skip: tuple[int, str] | None = None) -> set[int]:
        seen = {self.entry_id}
        stack = [self.entry_id]
        while stack:
            b = stack.pop()
            for e in self._succs[b]:
                if skip is not None and (e.src, e.kind) == skip:
                    continue
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return seen

    def reachable_without(self, src: int, kind: str) -> set[int]:
        """Reachability from entry ignoring src's out-edges of one kind."""
        return self._compute_reachable(skip=(src, kind))

    def reachable_from(self, block_id: int) -> set[int]:
        """Blocks reachable from block_id by one or more edges."""
        seen: set[int] = set()
        stack = [e.dst for e in self._succs[block_id]]
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(e.dst for e in self._succs[b])
        return seen

    def dominators(self) -> dict[int, set[int]]:
        """dom(b) for every reachable block, entry dominated by itself."""
        if self._dominators is not None:
            return self._dominators
        reach = self.reachable
        doms: dict[int, set[int]] = {b: set(reach) for b in reach}
        doms[self.entry_id] = {self.entry_id}
        changed = True
        while changed:
            changed = False
            for b in reach:
                if b == self.entry_id:
                    continue
                preds = [e.src for e in self._preds[b] if e.src in reach]
                new = set(reach)
                for p in preds:
                    new &= doms[p]
                if not preds:
                    new = set()
                new |= {b}
                if new != doms[b]:
                    doms[b] = new
                    changed = True
        self._dominators = doms
        return doms


class _Builder:
    def __init__(self) -> None:
        self.blocks: dict[int, BasicBlock] = {}
        self.edges: list[Edge] = []
        self.stmt_pos: dict[int, tuple[int, int]] = {}
        self._next_id = 0
        self.current = self.new_block()
        self.entry_id = self.current.id
        self.terminated = False
        self.pending_exit: list[int] = []
        # (continue_target, break_targets list to patch) per open loop
        self.loops: list[tuple[int, int]] = []

    def new_block(self) -> BasicBlock:
        block = BasicBlock(self._next_id)
        self.blocks[block.id] = block
        self._next_id += 1
        return block

    def edge(self, src: int, dst: int, kind: str) -> None:
        self.edges.append(Edge(src, dst, kind))

    def append(self, stmt: Stmt) -> None:
        if self.terminated:
            self.current = self.new_block()
            self.terminated = False
        self.stmt_pos[id(stmt)] = (self.current.id, len(self.current.statements))
        self.current.statements.append(stmt)

    def terminate_with(self, stmt: Stmt, condition: Expr | None) -> BasicBlock:
        """Close the current block with a branch condition; returns it."""
        if self.terminated:
            self.current = self.new_block()
            self.terminated = False
        block = self.current
        self.stmt_pos[id(stmt)] = (block.id, len(block.statements))
        block.condition = condition
        return block

    def start_block(self, block: BasicBlock) -> None:
        self.current = block
        self.terminated = False

    def add_stmt(self, stmt: Stmt) -> None:
        if isinstance(stmt, Block):
            for inner in stmt.statements:
                self.add_stmt(inner)
        elif isinstance(stmt, IfStmt):
            cond_block = self.terminate_with(stmt, stmt.condition)
            join = self.new_block()
            then_start = self.new_block()
            self.edge(cond_block.id, then_start.id, "true")
            self.start_block(then_start)
            self.add_stmt(stmt.then_branch)
            if not self.terminated:
                self.edge(self.current.id, join.id, "seq")
            if stmt.else_branch is not None:
                else_start = self.new_block()
                self.edge(cond_block.id, else_start.id, "false")
                self.start_block(else_start)
                self.add_stmt(stmt.else_branch)
                if not self.terminated:
                    self.edge(self.current.id, join.id, "seq")
            else:
                self.edge(cond_block.id, join.id, "false")
            self.start_block(join)
        elif isinstance(stmt, WhileStmt) and not stmt.check_after:
            header = self.new_block()
            self.edge(self.current.id, header.id, "seq")
            self.start_block(header)
            header_block = self.terminate_with(stmt, stmt.condition)
            after = self.new_block()
            body_start = self.new_block()
            self.edge(header_block.id, body_start.id, "true")
            self.edge(header_block.id, after.id, "false")
            self.loops.append((header_block.id, after.id))
            self.start_block(body_start)
            self.add_stmt(stmt.body)
            if not self.terminated:
                self.edge(self.current.id, header_block.id, "loop_back")
            self.loops.pop()
            self.start_block(after)
        elif isinstance(stmt, WhileStmt):  # do { } while (cond);
            body_start = self.new_block()
            self.edge(self.current.id, body_start.id, "seq")
            header = self.new_block()
            after = self.new_block()
            self.loops.append((header.id, after.id))
            self.start_block(body_start)
            self.add_stmt(stmt.body)
            if not self.terminated:
                self.edge(self.current.id, header.id, "seq")
            self.loops.pop()
            self.start_block(header)
            header_block = self.terminate_with(stmt, stmt.condition)
            self.edge(header_block.id, body_start.id, "loop_back")
            self.edge(header_block.id, after.id, "false")
            self.start_block(after)
        elif isinstance(stmt, ForStmt):
            if stmt.init is not None:
                self.add_stmt(stmt.init)
            header = self.new_block()
            self.edge(self.current.id, header.id, "seq")
            self.start_block(header)
            header_block = self.terminate_with(stmt, stmt.condition)
            after = self.new_block()
            body_start = self.new_block()
            self.edge(header_block.id, body_start.id,
                      "true" if stmt.condition is not None else "seq")
            if stmt.condition is not None:
                self.edge(header_block.id, after.id, "false")
            if stmt.post is not None:
                post_block = self.new_block()
                self.loops.append((post_block.id, after.id))
                self.start_block(body_start)
                self.add_stmt(stmt.body)
                if not self.terminated:
                    self.edge(self.current.id, post_block.id, "seq")
                self.loops.pop()
                self.start_block(post_block)
                self.add_stmt(stmt.post)
                self.edge(post_block.id, header_block.id, "loop_back")
                self.terminated = True
            else:
                self.loops.append((header_block.id, after.id))
                self.start_block(body_start)
                self.add_stmt(stmt.body)
                if not self.terminated:
                    self.edge(self.current.id, header_block.id, "loop_back")
                self.loops.pop()
            self.start_block(after)
        elif isinstance(stmt, ReturnStmt):
            self.append(stmt)
            self.pending_exit.append(self.current.id)
            self.terminated = True
        elif isinstance(stmt, RevertStmt):
            self.append(stmt)
            self.terminated = True  # no successors
        elif isinstance(stmt, BreakStmt):
            self.append(stmt)
            if self.loops:
                self.edge(self.current.id, self.loops[-1][1], "seq")
            self.terminated = True
        elif isinstance(stmt, ContinueStmt):
            self.append(stmt)
            if self.loops:
                self.edge(self.current.id, self.loops[-1][0], "loop_back")
            self.terminated = True
        else:
            # require/assert does not split: a failed check reverts the
            # whole transaction, so no intra-function path exists
            self.append(stmt)

    def finish(self) -> Cfg:
        if not self.terminated and self.current.condition is None \
                and not self.current.statements \
                and not any(e.src == self.current.id for e in self.edges):
            exit_block = self.current
        else:
            exit_block = self.new_block()
            if not self.terminated:
                self.edge(self.current.id, exit_block.id, "seq")
        for src in self.pending_exit:
            self.edges.append(Edge(src, exit_block.id, "seq"))
        cfg = Cfg(self.blocks, self.edges, self.entry_id, exit_block.id)
        cfg.stmt_pos = self.stmt_pos
        return cfg


def build_cfg(body: Block) -> Cfg:
    """CFG for one (already flattened) function body."""
    builder = _Builder()
    builder.add_stmt(body)
    return builder.finish()


# ---------------------------------------------------------------------------
# State writes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateWrite:
    var: str  # state variable name; "?" when unknown (opaque regions)
    display: str  # e.g. "userbalance[msg.sender]"
    kind: str  # "assign" | "compound" | "incdec" | "delete" | "opaque"
    span: Span


def _peel_target(expr: Expr) -> Optional[str]:
    while True:
        if isinstance(expr, (IndexAccess, MemberAccess)):
            expr = expr.base
        elif isinstance(expr, TypeCast):
            expr = expr.operand
        else:
            break
    if isinstance(expr, Identifier):
        return expr.name
    return None


def writes_in_stmt(stmt: Stmt, state_names: set[str],
                   local_names: set[str]) -> list[StateWrite]:
    """State writes performed directly by one statement (no recursion
    into nested statements; condition expressions are handled by the
    caller via terminator positions)."""
    writes: list[StateWrite] = []

    def classify(target: Expr, kind: str) -> None:
        name = _peel_target(target)
        if name is None:
            writes.append(StateWrite("?", unparse(target), kind, target.span))
            return
        if name in local_names or name not in state_names:
            return
        writes.append(StateWrite(name, unparse(target), kind, target.span))

    if isinstance(stmt, OpaqueStmt):
        writes.append(StateWrite("?", stmt.raw_text.strip()[:60] or "<opaque>",
                                 "opaque", stmt.span))
        return writes
    if isinstance(stmt, Assignment):
        if stmt.op == "delete":
            classify(stmt.target, "delete")
        elif stmt.op == "=":
            classify(stmt.target, "assign")
        else:
            classify(stmt.target, "compound")
    for top in stmt_exprs(stmt):
        for e in walk_expr(top):
            if isinstance(e, Unary) and e.op in ("++", "--"):
                classify(e.operand, "incdec")
    return writes


def _expr_writes(expr: Expr, state_names: set[str],
                 local_names: set[str]) -> list[StateWrite]:
    writes: list[StateWrite] = []
    for e in walk_expr(expr):
        if isinstance(e, Unary) and e.op in ("++", "--"):
            name = _peel_target(e.operand)
            if name and name not in local_names and name in state_names:
                writes.append(StateWrite(name, unparse(e.operand), "incdec",
                                         e.operand.span))
    return writes


# ---------------------------------------------------------------------------
# Call sites
# ---------------------------------------------------------------------------

@dataclass
class CallSite:
    call: Call
    kind: CallKind
    block_id: int
    stmt_index: int  # len(block.statements) when inside the terminator
    stmt: Optional[Stmt]  # enclosing statement; None for terminators
    function_key: str
    span: Span

    @property
    def target(self) -> Optional[Expr]:
        """The receiver expression (what is being called)."""
        callee = self.call.callee
        if isinstance(callee, MemberAccess):
            return callee.base
        return callee


# ---------------------------------------------------------------------------
# Per-function and per-contract flow facts
# ---------------------------------------------------------------------------

@dataclass
class FunctionFlow:
    function: FlatFunction
    key: str
    cfg: Optional[Cfg]
    writes_by_pos: dict[tuple[int, int], list[StateWrite]]
    call_sites: list[CallSite]
    local_names: set[str]


@dataclass
class ContractFlow:
    contract: FlatContract
    functions: dict[str, FunctionFlow]
    call_graph: dict[str, set[str]]
    vars_written_outside_ctor: set[str]
    externally_reachable_keys: set[str]


def _function_key(fn: FlatFunction) -> str:
    return fn.qualified_name.split(".", 1)[1]


def _collect_locals(fn: FlatFunction) -> set[str]:
    names = {p.name for p in fn.params if p.name}
    # named return values behave like locals
    names |= {p.name for p in fn.returns if p.name}
    if fn.body is not None:
        for stmt in walk_stmts(fn.body):
            if isinstance(stmt, LocalVarDecl):
                names.add(stmt.name)
    return names


def analyze_function(fn: FlatFunction, contract: FlatContract) -> FunctionFlow:
    key = _function_key(fn)
    local_names = _collect_locals(fn)
    state_names = {v.name for v in contract.state_vars}
    if fn.body is None:
        return FunctionFlow(fn, key, None, {}, [], local_names)
    cfg = build_cfg(fn.body)
    writes_by_pos: dict[tuple[int, int], list[StateWrite]] = {}
    call_sites: list[CallSite] = []

    def note_calls(expr: Expr, block_id: int, idx: int, stmt: Stmt | None) -> None:
        for e in walk_expr(expr):
            if isinstance(e, Call) and e.call_kind in EXTERNAL_CALL_KINDS:
                call_sites.append(CallSite(e, e.call_kind, block_id, idx,
                                           stmt, key, e.span))

    for block in cfg.blocks.values():
        for idx, stmt in enumerate(block.statements):
            ws = writes_in_stmt(stmt, state_names, local_names)
            if ws:
                writes_by_pos[(block.id, idx)] = ws
            for top in stmt_exprs(stmt):
                note_calls(top, block.id, idx, stmt)
        if block.condition is not None:
            term_idx = len(block.statements)
            ws = _expr_writes(block.condition, state_names, local_names)
            if ws:
                writes_by_pos[(block.id, term_idx)] = ws
            note_calls(block.condition, block.id, term_idx, None)

    call_sites.sort(key=lambda s: (s.span.line, s.span.column, s.span.offset))
    return FunctionFlow(fn, key, cfg, writes_by_pos, call_sites, local_names)


def writes_after(cfg: Cfg, block_id: int, stmt_index: int,
                 writes_by_pos: dict[tuple[int, int], list[StateWrite]],
                 include_same_stmt: bool = False) -> list[StateWrite]:
    """State writes on some path strictly after the given position.

    Includes later writes in the same block, everything in blocks
    reachable from it, and, when the block sits on a cycle, its own
    earlier writes (the next loop iteration runs them after the call).
    include_same_stmt adds the writes of the position itself, for call
    sites embedded in the right side of an assignment.
    """
    result: list[StateWrite] = []
    seen: set[tuple[int, int, int]] = set()

    def add(pos: tuple[int, int]) -> None:
        for i, w in enumerate(writes_by_pos.get(pos, [])):
            key = (pos[0], pos[1], i)
            if key not in seen:
                seen.add(key)
                result.append(w)

    block = cfg.blocks[block_id]
    upper = len(block.statements) + (1 if block.condition is not None else 0)
    for idx in range(stmt_index + 1, upper):
        add((block_id, idx))
    if include_same_stmt:
        add((block_id, stmt_index))
    forward = cfg.reachable_from(block_id)
    for b in forward:
        bb = cfg.blocks[b]
        hi = len(bb.statements) + (1 if bb.condition is not None else 0)
        for idx in range(hi):
            add((b, idx))
    if block_id in forward:
        # the site's own block repeats; its earlier writes run after the call
        for idx in range(0, stmt_index + 1):
            add((block_id, idx))
    return result


@dataclass(frozen=True)
class Guard:
    condition: Expr
    negated: bool
    source: str  # "require" | "branch"
    span: Span


def _expand_guard(cond: Expr, negated: bool, source: str,
                  span: Span) -> list[Guard]:
    # require(a && b) checks both; !(a || b) forces both negations
    if not negated and isinstance(cond, Binary) and cond.op == "&&":
        return (_expand_guard(cond.left, False, source, span)
                + _expand_guard(cond.right, False, source, span))
    if negated and isinstance(cond, Binary) and cond.op == "||":
        return (_expand_guard(cond.left, True, source, span)
                + _expand_guard(cond.right, True, source, span))
    # peel double negation
    if isinstance(cond, Unary) and cond.op == "!" and cond.prefix:
        return _expand_guard(cond.operand, not negated, source, span)
    return [Guard(cond, negated, source, span)]


def guards_of(cfg: Cfg, block_id: int, stmt_index: int) -> list[Guard]:
    """Conditions every entry->site path has established, in block order."""
    if block_id not in cfg.reachable:
        return []
    doms = cfg.dominators()
    site_doms = doms.get(block_id, set())
    guards: list[Guard] = []
    for b in sorted(site_doms):
        block = cfg.blocks[b]
        limit = stmt_index if b == block_id else len(block.statements)
        for idx in range(min(limit, len(block.statements))):
            stmt = block.statements[idx]
            if isinstance(stmt, RequireStmt):
                guards.extend(_expand_guard(stmt.condition, False, "require",
                                            stmt.span))
        if b == block_id or block.condition is None:
            continue
        # strict dominator with a branch terminator: which polarity is forced?
        if block_id not in cfg.reachable_without(b, "true"):
            span = getattr(block.condition, "span", Span(0, 0, 0, 0))
            guards.extend(_expand_guard(block.condition, False, "branch", span))
        elif block_id not in cfg.reachable_without(b, "false"):
            span = getattr(block.condition, "span", Span(0, 0, 0, 0))
            guards.extend(_expand_guard(block.condition, True, "branch", span))
    return guards


# ---------------------------------------------------------------------------
# Value provenance
# ---------------------------------------------------------------------------

PROVENANCES = ("hardcoded_constant", "state_var_fixed", "state_var_mutable",
               "msg_value", "parameter", "computed", "unknown")


def _initializer_literal_derived(expr: Expr, contract: FlatContract,
                                 written: set[str],
                                 visiting: set[str]) -> bool:
    if isinstance(expr, Literal):
        return True
    if isinstance(expr, TypeCast):
        return _initializer_literal_derived(expr.operand, contract, written,
                                            visiting)
    if isinstance(expr, Unary):
        return _initializer_literal_derived(expr.operand, contract, written,
                                            visiting)
    if isinstance(expr, Binary):
        return (_initializer_literal_derived(expr.left, contract, written, visiting)
                and _initializer_literal_derived(expr.right, contract, written,
                                                 visiting))
    if isinstance(expr, Identifier):
        if expr.name in visiting:
            return False
        var = contract.state_var(expr.name)
        if var is None:
            return False
        return _is_fixed_state_var(var, contract, written,
                                   visiting | {expr.name})
    return False


def _is_fixed_state_var(var: StateVarDef, contract: FlatContract,
                        written: set[str], visiting: set[str]) -> bool:
    if var.is_fixed_declared:
        return True
    if contract.has_opaque:
        return False  # an unparsed region could write anything
    if var.name in written or "?" in written:
        return False
    if var.initializer is None:
        return False
    return _initializer_literal_derived(var.initializer, contract, written,
                                        visiting)


def _single_assignment_initializer(name: str, fn: FlatFunction) -> Expr | None:
    """Initializer of a local assigned exactly once (at declaration)."""
    if fn.body is None:
        return None
    decl: LocalVarDecl | None = None
    extra_writes = 0
    for stmt in walk_stmts(fn.body):
        if isinstance(stmt, LocalVarDecl) and stmt.name == name:
            if decl is not None:
                return None  # shadowing; give up
            decl = stmt
        elif isinstance(stmt, Assignment):
            if _peel_target(stmt.target) == name:
                extra_writes += 1
        for top in stmt_exprs(stmt):
            for e in walk_expr(top):
                if isinstance(e, Unary) and e.op in ("++", "--") and \
                        _peel_target(e.operand) == name:
                    extra_writes += 1
    if decl is None or extra_writes or decl.initializer is None:
        return None
    return decl.initializer


def value_provenance(expr: Expr, contract: FlatContract,
                     function: FlatFunction | None = None,
                     guards: Iterable[Guard] = (),
                     written_outside_ctor: set[str] | None = None,
                     _depth: int = 0) -> str:
    """Where a value could come from, as a coarse bucket."""
    if _depth > 16:
        return "unknown"
    written = written_outside_ctor if written_outside_ctor is not None \
        else _written_outside_ctor(contract)
    while isinstance(expr, TypeCast):
        expr = expr.operand
    if isinstance(expr, Literal):
        return "hardcoded_constant"
    if isinstance(expr, MsgValue):
        return "msg_value"
    if isinstance(expr, (MsgSender, ThisRef)):
        return "unknown"
    if isinstance(expr, (Binary, Unary)):
        return "computed"
    if isinstance(expr, Identifier):
        name = expr.name
        for g in guards:
            if g.negated or not isinstance(g.condition, Binary):
                continue
            if g.condition.op != "==":
                continue
            left, right = g.condition.left, g.condition.right
            if (isinstance(left, MsgValue) and isinstance(right, Identifier)
                    and right.name == name):
                return "msg_value"
            if (isinstance(right, MsgValue) and isinstance(left, Identifier)
                    and left.name == name):
                return "msg_value"
        var = contract.state_var(name)
        if var is not None and (function is None
                                or name not in _flow_locals(function)):
            if _is_fixed_state_var(var, contract, written, {name}):
                return "state_var_fixed"
            return "state_var_mutable"
        if function is not None:
            if name in {p.name for p in function.params}:
                return "parameter"
            init = _single_assignment_initializer(name, function)
            if init is not None:
                return value_provenance(init, contract, function, guards,
                                        written, _depth + 1)
        return "unknown"
    return "unknown"


def _flow_locals(fn: FlatFunction) -> set[str]:
    return _collect_locals(fn)


def _written_outside_ctor(contract: FlatContract) -> set[str]:
    written: set[str] = set()
    state_names = {v.name for v in contract.state_vars}
    for fn in contract.functions:
        if fn.is_constructor or fn.body is None:
            continue
        locals_ = _collect_locals(fn)
        for stmt in walk_stmts(fn.body):
            for w in writes_in_stmt(stmt, state_names, locals_):
                written.add(w.var)
            for top in stmt_exprs(stmt):
                for w in _expr_writes(top, state_names, locals_):
                    written.add(w.var)
    return written


# ---------------------------------------------------------------------------
# Call graph / reachability
# ---------------------------------------------------------------------------

def _internal_callees(fn: FlatFunction, fn_keys: set[str]) -> set[str]:
    callees: set[str] = set()
    if fn.body is None:
        return callees
    for stmt in walk_stmts(fn.body):
        for top in stmt_exprs(stmt):
            for e in walk_expr(top):
                if not isinstance(e, Call):
                    continue
                if isinstance(e.callee, Identifier) and e.call_kind is None \
                        and e.callee.name in fn_keys:
                    callees.add(e.callee.name)
                elif isinstance(e.callee, MemberAccess) and \
                        isinstance(e.callee.base, ThisRef) and \
                        e.callee.member in fn_keys:
                    callees.add(e.callee.member)
    return callees


def build_call_graph(contract: FlatContract) -> dict[str, set[str]]:
    keys = {_function_key(fn) for fn in contract.functions}
    graph: dict[str, set[str]] = {}
    for fn in contract.functions:
        graph[_function_key(fn)] = _internal_callees(fn, keys)
    return graph


def _reachable_keys(contract: FlatContract,
                    call_graph: dict[str, set[str]]) -> set[str]:
    roots = set()
    for fn in contract.functions:
        if fn.is_constructor:
            continue
        if fn.visibility in ("public", "external"):
            roots.add(_function_key(fn))
    seen = set(roots)
    stack = list(roots)
    while stack:
        k = stack.pop()
        for callee in call_graph.get(k, ()):
            if callee not in seen:
                seen.add(callee)
                stack.append(callee)
    return seen


def analyze_contract(contract: FlatContract,
                     deadline: Deadline | None = None) -> ContractFlow:
    deadline = deadline or Deadline.unlimited()
    functions: dict[str, FunctionFlow] = {}
    for fn in contract.functions:
        deadline.check()
        flow = analyze_function(fn, contract)
        functions[flow.key] = flow
    call_graph = build_call_graph(contract)
    return ContractFlow(
        contract=contract,
        functions=functions,
        call_graph=call_graph,
        vars_written_outside_ctor=_written_outside_ctor(contract),
        externally_reachable_keys=_reachable_keys(contract, call_graph),
    )


def externally_reachable(flow: ContractFlow, key: str) -> bool:
    """Can an outside account cause this function to run (directly or
    through internal dispatch from a public/external entry point)?"""
    return key in flow.externally_reachable_keys
