"""Flatten inheritance and inline modifiers.

Linearization is deliberately simpler than the compiler's C3: the order is
the contract itself followed by a declaration-order depth-first walk of
its bases, first occurrence winning. Member resolution scans that order
and the first declaring contract wins. This matches single-inheritance
chains exactly and diverges from C3 only on exotic diamonds, which is an
accepted approximation for triage purposes.

Modifier inlining substitutes invocation arguments for modifier
parameters, then splices the (already-inlined) inner body at each `_;`
placeholder. Multiple modifiers nest outside-in: `f() A B` runs A's
prologue, then B's, then the body, then B's epilogue, then A's.
A modifier without placeholders swallows the body, as the language
defines. Unresolvable modifiers are skipped with a diagnostic; no
suppression may later rely on code that was never seen.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .errors import CyclicInheritance
from .frontend.ast_nodes import (
    Binary, Block, Call, Conditional, ContractDef, Diagnostic, Expr,
    FunctionDef, Identifier, IndexAccess, MemberAccess, ModifierDef,
    ModifierInvocation, NewExpr, Param, PlaceholderStmt, SourceUnit, Span,
    StateVarDef, Stmt, TupleExpr, TypeCast, Unary, expr_slots, walk_stmts,
)


@dataclass
class FlatFunction:
    name: str  # "" for fallback/receive
    contract: str
    qualified_name: str
    fn_kind: str
    visibility: str
    mutability: str | None
    params: list[Param]
    returns: list[Param]
    body: Block | None  # modifiers inlined
    is_constructor: bool
    origin: str  # contract that declared the winning definition
    applied_modifiers: list[str] = field(default_factory=list)
    span: Span = Span(0, 0, 0, 0)


@dataclass
class FlatContract:
    name: str
    kind: str
    linearization: list[str]
    state_vars: list[StateVarDef]
    state_var_origin: dict[str, str]
    functions: list[FlatFunction]
    modifiers: dict[str, ModifierDef]
    has_opaque: bool = False  # any opaque region anywhere in a body
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def state_var(self, name: str) -> StateVarDef | None:
        for var in self.state_vars:
            if var.name == name:
                return var
        return None


def linearization_order(contract: ContractDef,
                        by_name: dict[str, ContractDef]) -> list[str]:
    """Contract first, then declaration-order DFS of bases, first-seen wins.

    Raises CyclicInheritance on a cycle; unknown bases are kept in the
    order (callers diagnose them) but not expanded.
    """
    order: list[str] = []
    seen: set[str] = set()
    path: set[str] = set()

    def visit(name: str) -> None:
        if name in path:
            raise CyclicInheritance(f"inheritance cycle through {name!r}")
        if name in seen:
            return
        seen.add(name)
        order.append(name)
        decl = by_name.get(name)
        if decl is None:
            return
        path.add(name)
        for base in decl.bases:
            visit(base)
        path.discard(name)

    visit(contract.name)
    return order


def _subst_idents(expr: Expr, mapping: dict[str, Expr]) -> Expr:
    if isinstance(expr, Identifier):
        if expr.name in mapping:
            return copy.deepcopy(mapping[expr.name])
        return expr
    if isinstance(expr, MemberAccess):
        expr.base = _subst_idents(expr.base, mapping)
    elif isinstance(expr, IndexAccess):
        expr.base = _subst_idents(expr.base, mapping)
        if expr.index is not None:
            expr.index = _subst_idents(expr.index, mapping)
    elif isinstance(expr, Call):
        expr.callee = _subst_idents(expr.callee, mapping)
        expr.args = [_subst_idents(a, mapping) for a in expr.args]
        for opt in expr.options:
            opt.value = _subst_idents(opt.value, mapping)
    elif isinstance(expr, NewExpr):
        expr.args = [_subst_idents(a, mapping) for a in expr.args]
    elif isinstance(expr, TypeCast):
        expr.operand = _subst_idents(expr.operand, mapping)
    elif isinstance(expr, Binary):
        expr.left = _subst_idents(expr.left, mapping)
        expr.right = _subst_idents(expr.right, mapping)
    elif isinstance(expr, Unary):
        expr.operand = _subst_idents(expr.operand, mapping)
    elif isinstance(expr, Conditional):
        expr.condition = _subst_idents(expr.condition, mapping)
        expr.if_true = _subst_idents(expr.if_true, mapping)
        expr.if_false = _subst_idents(expr.if_false, mapping)
    elif isinstance(expr, TupleExpr):
        expr.items = [_subst_idents(i, mapping) for i in expr.items]
    return expr


def _apply_subst(body: Block, mapping: dict[str, Expr]) -> None:
    if not mapping:
        return
    for stmt in walk_stmts(body):
        for holder, attr in expr_slots(stmt):
            setattr(holder, attr, _subst_idents(getattr(holder, attr), mapping))


def _splice_placeholders(block: Block, inner: Block) -> int:
    """Replace each `_;` with the inner statements; returns replacements."""
    count = 0
    new_statements: list[Stmt] = []
    for stmt in block.statements:
        if isinstance(stmt, PlaceholderStmt):
            filler = inner if count == 0 else copy.deepcopy(inner)
            new_statements.extend(filler.statements)
            count += 1
        else:
            for child in _child_blocks(stmt):
                count += _splice_placeholders(child, inner)
            new_statements.append(stmt)
    block.statements = new_statements
    return count


def _child_blocks(stmt: Stmt):
    from .frontend.ast_nodes import ForStmt, IfStmt, WhileStmt
    if isinstance(stmt, Block):
        yield stmt
    elif isinstance(stmt, IfStmt):
        yield stmt.then_branch
        if stmt.else_branch is not None:
            yield stmt.else_branch
    elif isinstance(stmt, WhileStmt):
        yield stmt.body
    elif isinstance(stmt, ForStmt):
        yield stmt.body


def inline_modifiers(fn: FunctionDef, modifiers: dict[str, ModifierDef],
                     diagnostics: list[Diagnostic]) -> tuple[Block | None, list[str]]:
    """Expand a function's modifier stack into one flat body.

    Returns (body, names of modifiers actually applied). The original
    function body is never mutated; expansion works on copies.
    """
    if fn.body is None:
        return None, []
    invocations = fn.modifiers
    if not invocations:
        return fn.body, []
    inner = copy.deepcopy(fn.body)
    applied: list[str] = []
    for inv in reversed(invocations):
        definition = modifiers.get(inv.name)
        if definition is None or definition.body is None:
            diagnostics.append(Diagnostic(
                f"modifier {inv.name!r} not resolvable; left uninlined",
                inv.span.line, inv.span.column, "warning"))
            continue
        args = inv.args or []
        if len(args) != len(definition.params):
            diagnostics.append(Diagnostic(
                f"modifier {inv.name!r} expects {len(definition.params)} "
                f"argument(s), got {len(args)}; left uninlined",
                inv.span.line, inv.span.column, "warning"))
            continue
        expanded = copy.deepcopy(definition.body)
        mapping = {p.name: a for p, a in zip(definition.params, args) if p.name}
        _apply_subst(expanded, mapping)
        replaced = _splice_placeholders(expanded, inner)
        if replaced == 0:
            diagnostics.append(Diagnostic(
                f"modifier {inv.name!r} has no placeholder; "
                f"it replaces the wrapped body",
                inv.span.line, inv.span.column, "warning"))
        inner = expanded
        applied.append(inv.name)
    applied.reverse()
    return inner, applied


def _flatten_contract(contract: ContractDef,
                      by_name: dict[str, ContractDef]) -> FlatContract:
    diagnostics: list[Diagnostic] = []
    order = linearization_order(contract, by_name)
    for name in order:
        if name not in by_name:
            diagnostics.append(Diagnostic(
                f"base contract {name!r} not found in this file",
                contract.span.line, contract.span.column, "warning"))

    resolved = [by_name[n] for n in order if n in by_name]
    # process most-base first so more-derived definitions overwrite;
    # dict insertion order keeps the base-first declaration layout
    vars_merged: dict[str, StateVarDef] = {}
    var_origin: dict[str, str] = {}
    fns_merged: dict[str, tuple[FunctionDef, str]] = {}
    mods_merged: dict[str, ModifierDef] = {}
    for decl in reversed(resolved):
        for var in decl.state_vars:
            vars_merged[var.name] = var
            var_origin[var.name] = decl.name
        for fn in decl.functions:
            key = "constructor" if fn.is_constructor else (fn.name or fn.fn_kind)
            fns_merged[key] = (fn, decl.name)
        for mod in decl.modifiers:
            mods_merged[mod.name] = mod

    functions: list[FlatFunction] = []
    for key, (fn, origin) in fns_merged.items():
        body, applied = inline_modifiers(fn, mods_merged, diagnostics)
        functions.append(FlatFunction(
            name=fn.name,
            contract=contract.name,
            qualified_name=f"{contract.name}.{key}",
            fn_kind=fn.fn_kind,
            visibility=fn.visibility,
            mutability=fn.mutability,
            params=fn.params,
            returns=fn.returns,
            body=body,
            is_constructor=fn.is_constructor,
            origin=origin,
            applied_modifiers=applied,
            span=fn.span,
        ))

    flat = FlatContract(
        name=contract.name,
        kind=contract.kind,
        linearization=order,
        state_vars=list(vars_merged.values()),
        state_var_origin=var_origin,
        functions=functions,
        modifiers=mods_merged,
        diagnostics=diagnostics,
    )
    from .frontend.ast_nodes import OpaqueStmt
    for fn in functions:
        if fn.body is None:
            continue
        for stmt in walk_stmts(fn.body):
            if isinstance(stmt, OpaqueStmt):
                flat.has_opaque = True
                break
        if flat.has_opaque:
            break
    return flat


def linearize(unit: SourceUnit) -> list[FlatContract]:
    """Flatten every contract in the unit. Contracts whose inheritance is
    cyclic are skipped with a diagnostic on the unit."""
    by_name = {c.name: c for c in unit.contracts}
    flats: list[FlatContract] = []
    for contract in unit.contracts:
        try:
            flats.append(_flatten_contract(contract, by_name))
        except CyclicInheritance as exc:
            unit.diagnostics.append(Diagnostic(
                f"contract {contract.name!r} skipped: {exc}",
                contract.span.line, contract.span.column, "error"))
    return flats
