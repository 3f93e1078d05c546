"""Reconstruct source text from AST nodes.

The contract: for any node parsed from real source, the token stream of
unparse(node) equals the token stream of the node's source span. The
emitter never makes layout decisions beyond single spaces; redundant
parentheses come back via paren_depth, call-option sugar via the recorded
spelling, unparsed regions via their raw text.
"""

from __future__ import annotations

from .ast_nodes import (
    Assignment, Binary, Block, BreakStmt, Call, Conditional, ContinueStmt,
    ContractDef, Expr, ExprStmt, ForStmt, FunctionDef, Identifier, IfStmt,
    IndexAccess, Literal, LocalVarDecl, MemberAccess, ModifierDef,
    ModifierInvocation, MsgSender, MsgValue, NewExpr, OpaqueStmt, Param,
    PlaceholderStmt, RawDirective, RequireStmt, ReturnStmt, RevertStmt,
    SkippedDecl, SourceUnit, StateVarDef, Stmt, ThisRef, TupleExpr,
    TypeCast, Unary, WhileStmt, join_tokens,
)


def _expr(e: Expr) -> list[str]:
    parts = _expr_inner(e)
    if e.paren_depth:
        parts = ["("] * e.paren_depth + parts + [")"] * e.paren_depth
    return parts


def _comma_join(items: list[list[str]]) -> list[str]:
    out: list[str] = []
    for i, item in enumerate(items):
        if i:
            out.append(",")
        out.extend(item)
    return out


def _expr_inner(e: Expr) -> list[str]:
    if isinstance(e, Identifier):
        return [e.name]
    if isinstance(e, MsgSender):
        return ["msg", ".", "sender"]
    if isinstance(e, MsgValue):
        return ["msg", ".", "value"]
    if isinstance(e, ThisRef):
        return ["this"]
    if isinstance(e, Literal):
        return [e.text] + ([e.unit] if e.unit else [])
    if isinstance(e, MemberAccess):
        return _expr(e.base) + [".", e.member]
    if isinstance(e, IndexAccess):
        inner = _expr(e.index) if e.index is not None else []
        return _expr(e.base) + ["["] + inner + ["]"]
    if isinstance(e, Call):
        parts = _expr(e.callee)
        if e.options_style == "legacy":
            for opt in e.options:
                parts += [".", opt.name, "("] + _expr(opt.value) + [")"]
        elif e.options_style == "braces":
            parts.append("{")
            for i, opt in enumerate(e.options):
                if i:
                    parts.append(",")
                parts += [opt.name, ":"] + _expr(opt.value)
            parts.append("}")
        parts += ["("] + _comma_join([_expr(a) for a in e.args]) + [")"]
        return parts
    if isinstance(e, NewExpr):
        return (["new", e.type_text, "("]
                + _comma_join([_expr(a) for a in e.args]) + [")"])
    if isinstance(e, TypeCast):
        return [e.type_name, "("] + _expr(e.operand) + [")"]
    if isinstance(e, Binary):
        return _expr(e.left) + [e.op] + _expr(e.right)
    if isinstance(e, Unary):
        if e.prefix:
            return [e.op] + _expr(e.operand)
        return _expr(e.operand) + [e.op]
    if isinstance(e, Conditional):
        return (_expr(e.condition) + ["?"] + _expr(e.if_true)
                + [":"] + _expr(e.if_false))
    if isinstance(e, TupleExpr):
        return ["("] + _comma_join([_expr(i) for i in e.items]) + [")"]
    raise TypeError(f"cannot unparse expression {type(e).__name__}")


def _simple_stmt(s: Stmt, semi: bool) -> list[str]:
    tail = [";"] if semi else []
    if isinstance(s, LocalVarDecl):
        parts = [s.type_text]
        if s.location:
            parts.append(s.location)
        parts.append(s.name)
        if s.initializer is not None:
            parts += ["="] + _expr(s.initializer)
        return parts + tail
    if isinstance(s, Assignment):
        if s.op == "delete":
            return ["delete"] + _expr(s.target) + tail
        parts = _expr(s.target) + [s.op]
        if s.value is not None:
            parts += _expr(s.value)
        return parts + tail
    if isinstance(s, ExprStmt):
        return _expr(s.expr) + tail
    raise TypeError(f"not a simple statement: {type(s).__name__}")


def _stmt(s: Stmt) -> list[str]:
    if isinstance(s, Block):
        parts = ["unchecked"] if s.unchecked else []
        if s.braced:
            parts.append("{")
            for inner in s.statements:
                parts += _stmt(inner)
            parts.append("}")
            return parts
        for inner in s.statements:
            parts += _stmt(inner)
        return parts
    if isinstance(s, IfStmt):
        parts = ["if", "("] + _expr(s.condition) + [")"] + _stmt(s.then_branch)
        if s.else_branch is not None:
            parts += ["else"] + _stmt(s.else_branch)
        return parts
    if isinstance(s, WhileStmt):
        if s.check_after:
            return (["do"] + _stmt(s.body)
                    + ["while", "("] + _expr(s.condition) + [")", ";"])
        return ["while", "("] + _expr(s.condition) + [")"] + _stmt(s.body)
    if isinstance(s, ForStmt):
        parts = ["for", "("]
        if s.init is not None:
            parts += _simple_stmt(s.init, semi=False)
        parts.append(";")
        if s.condition is not None:
            parts += _expr(s.condition)
        parts.append(";")
        if s.post is not None:
            parts += _simple_stmt(s.post, semi=False)
        parts.append(")")
        return parts + _stmt(s.body)
    if isinstance(s, RequireStmt):
        parts = [s.name, "("] + _expr(s.condition)
        if s.message is not None:
            parts += [","] + _expr(s.message)
        return parts + [")", ";"]
    if isinstance(s, RevertStmt):
        if s.keyword == "throw":
            return ["throw", ";"]
        if s.error_call is None:
            return ["revert", "(", ")", ";"]
        if isinstance(s.error_call, Call):
            return ["revert"] + _expr(s.error_call) + [";"]
        return ["revert", "("] + _expr(s.error_call) + [")", ";"]
    if isinstance(s, ReturnStmt):
        parts = ["return"]
        if s.value is not None:
            parts += _expr(s.value)
        return parts + [";"]
    if isinstance(s, BreakStmt):
        return ["break", ";"]
    if isinstance(s, ContinueStmt):
        return ["continue", ";"]
    if isinstance(s, PlaceholderStmt):
        return ["_", ";"]
    if isinstance(s, OpaqueStmt):
        return [s.raw_text] if s.raw_text else []
    return _simple_stmt(s, semi=True)


def _params(params: list[Param]) -> list[str]:
    items = []
    for p in params:
        parts = [p.type_text]
        if p.location:
            parts.append(p.location)
        if p.name:
            parts.append(p.name)
        items.append(parts)
    return ["("] + _comma_join(items) + [")"]


def _header_items(fn) -> list[str]:
    parts: list[str] = []
    for item in fn.header_items:
        if isinstance(item, str):
            if item == "returns":
                parts += ["returns"] + _params(fn.returns)
            else:
                parts.append(item)
        elif isinstance(item, ModifierInvocation):
            parts.append(item.name)
            if item.args is not None:
                parts += ["("] + _comma_join([_expr(a) for a in item.args]) + [")"]
    return parts


def _function(fn: FunctionDef) -> list[str]:
    parts = [fn.declared_with]
    if fn.name and fn.declared_with == "function":
        parts.append(fn.name)
    parts += _params(fn.params)
    parts += _header_items(fn)
    if fn.body is not None:
        parts += _stmt(fn.body)
    else:
        parts.append(";")
    return parts


def _modifier(mod: ModifierDef) -> list[str]:
    parts = ["modifier", mod.name]
    if mod.paren_params:
        parts += _params(mod.params)
    parts += _header_items(mod)
    if mod.body is not None:
        parts += _stmt(mod.body)
    else:
        parts.append(";")
    return parts


def _state_var(var: StateVarDef) -> list[str]:
    parts = [var.type_text] + list(var.attrs) + [var.name]
    if var.initializer is not None:
        parts += ["="] + _expr(var.initializer)
    return parts + [";"]


def _contract(c: ContractDef) -> list[str]:
    parts = ["abstract"] if c.is_abstract else []
    parts += [c.kind, c.name]
    if c.bases:
        parts.append("is")
        items = []
        for i, base in enumerate(c.bases):
            entry = [base]
            args = c.base_args[i] if i < len(c.base_args) else None
            if args is not None:
                entry += ["("] + _comma_join([_expr(a) for a in args]) + [")"]
            items.append(entry)
        parts += _comma_join(items)
    parts.append("{")
    for member in c.members:
        if isinstance(member, StateVarDef):
            parts += _state_var(member)
        elif isinstance(member, FunctionDef):
            parts += _function(member)
        elif isinstance(member, ModifierDef):
            parts += _modifier(member)
        elif isinstance(member, SkippedDecl):
            if member.raw_text:
                parts.append(member.raw_text)
    parts.append("}")
    return parts


def unparse(node) -> str:
    """Source text for any AST node; re-lexes to the node's own tokens."""
    if isinstance(node, SourceUnit):
        parts: list[str] = []
        for item in node.items:
            if isinstance(item, ContractDef):
                parts += _contract(item)
            elif isinstance(item, RawDirective):
                if item.raw_text:
                    parts.append(item.raw_text)
        return join_tokens(parts)
    if isinstance(node, ContractDef):
        return join_tokens(_contract(node))
    if isinstance(node, FunctionDef):
        return join_tokens(_function(node))
    if isinstance(node, ModifierDef):
        return join_tokens(_modifier(node))
    if isinstance(node, StateVarDef):
        return join_tokens(_state_var(node))
    if isinstance(node, (SkippedDecl, RawDirective)):
        return node.raw_text
    if isinstance(node, Param):
        parts = [node.type_text]
        if node.location:
            parts.append(node.location)
        if node.name:
            parts.append(node.name)
        return join_tokens(parts)
    if isinstance(node, Stmt):
        return join_tokens(_stmt(node))
    if isinstance(node, Expr):
        return join_tokens(_expr(node))
    raise TypeError(f"cannot unparse {type(node).__name__}")
