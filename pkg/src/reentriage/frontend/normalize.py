"""Canonicalize call spellings and classify call kinds.

Three rewrites, applied bottom-up and idempotent as a set:

* `X(expr)` where X names a contract/interface/library declared in the
  same unit becomes a TypeCast; `IERC20(token).transfer(...)` then
  classifies by its member call, not as a call of X.
* Legacy option chains `target.call.value(v).gas(g)(args)` collapse into
  one Call carrying ordered options, same as the 0.7+ braces spelling
  `target.call{value: v, gas: g}(args)`. The spelling is remembered so
  source can be reconstructed.
* Every Call gets its call_kind: low_level_call, transfer, send,
  delegatecall, external_member_call, or None for internal/builtin/static
  calls that cannot leave the contract. Ether transfer/send take exactly
  one argument; two-argument `transfer(to, amount)` is an ERC20 member
  call, not an ether send.
"""

from __future__ import annotations

from .ast_nodes import (
    Binary, Call, CallKind, CallOption, Conditional, Expr, Identifier,
    IndexAccess, MemberAccess, ModifierInvocation, NewExpr, SourceUnit,
    TupleExpr, TypeCast, Unary, expr_slots, walk_stmts,
)

# namespaces whose member calls never reach another contract
_BUILTIN_NAMESPACES = frozenset(["abi", "block", "tx", "super", "msg"])

_BUILTIN_FUNCTIONS = frozenset(
    ["keccak256", "sha256", "sha3", "ripemd160", "ecrecover", "addmod",
     "mulmod", "selfdestruct", "suicide", "blockhash", "gasleft", "type"])

_OPTION_MEMBERS = frozenset(["value", "gas"])


def _transform(expr: Expr, declared_types: frozenset[str]) -> Expr:
    # children first
    if isinstance(expr, MemberAccess):
        expr.base = _transform(expr.base, declared_types)
    elif isinstance(expr, IndexAccess):
        expr.base = _transform(expr.base, declared_types)
        if expr.index is not None:
            expr.index = _transform(expr.index, declared_types)
    elif isinstance(expr, Call):
        expr.callee = _transform(expr.callee, declared_types)
        expr.args = [_transform(a, declared_types) for a in expr.args]
        for opt in expr.options:
            opt.value = _transform(opt.value, declared_types)
    elif isinstance(expr, NewExpr):
        expr.args = [_transform(a, declared_types) for a in expr.args]
    elif isinstance(expr, TypeCast):
        expr.operand = _transform(expr.operand, declared_types)
    elif isinstance(expr, Binary):
        expr.left = _transform(expr.left, declared_types)
        expr.right = _transform(expr.right, declared_types)
    elif isinstance(expr, Unary):
        expr.operand = _transform(expr.operand, declared_types)
    elif isinstance(expr, Conditional):
        expr.condition = _transform(expr.condition, declared_types)
        expr.if_true = _transform(expr.if_true, declared_types)
        expr.if_false = _transform(expr.if_false, declared_types)
    elif isinstance(expr, TupleExpr):
        expr.items = [_transform(i, declared_types) for i in expr.items]

    if not isinstance(expr, Call):
        return expr

    # declared-type cast written like a call
    if (isinstance(expr.callee, Identifier)
            and expr.callee.name in declared_types
            and len(expr.args) == 1 and not expr.options):
        cast = TypeCast(expr.callee.name, expr.args[0],
                        span=expr.span, paren_depth=expr.paren_depth)
        return cast

    # collapse legacy .value()/.gas() chains into options
    peeled = False
    while (isinstance(expr.callee, Call)
           and isinstance(expr.callee.callee, MemberAccess)
           and expr.callee.callee.member in _OPTION_MEMBERS
           and len(expr.callee.args) == 1
           and not expr.callee.options):
        inner = expr.callee
        expr.options.insert(
            0, CallOption(inner.callee.member, inner.args[0]))
        expr.callee = inner.callee.base
        peeled = True
    if peeled:
        expr.options_style = "legacy"

    expr.call_kind = _classify(expr, declared_types)
    return expr


def _classify(call: Call, declared_types: frozenset[str]) -> CallKind | None:
    callee = call.callee
    if isinstance(callee, MemberAccess):
        member = callee.member
        base = callee.base
        if member == "call":
            return CallKind.LOW_LEVEL_CALL
        if member in ("delegatecall", "callcode"):
            return CallKind.DELEGATECALL
        if member == "transfer" and len(call.args) == 1:
            return CallKind.TRANSFER
        if member == "send" and len(call.args) == 1:
            return CallKind.SEND
        if isinstance(base, Identifier):
            if base.name in _BUILTIN_NAMESPACES:
                return None
            if base.name in declared_types:
                return None  # library/static member, not a deployed target
        return CallKind.EXTERNAL_MEMBER_CALL
    if isinstance(callee, Identifier):
        # plain identifier calls stay in-contract (internal dispatch) or
        # hit builtins; neither can re-enter
        return None
    return None


def _normalize_body(body, declared_types: frozenset[str]) -> None:
    for stmt in walk_stmts(body):
        for holder, attr in expr_slots(stmt):
            setattr(holder, attr, _transform(getattr(holder, attr),
                                             declared_types))


def normalize_call_forms(unit: SourceUnit) -> SourceUnit:
    """Apply all call rewrites across the unit, in place. Idempotent."""
    declared = frozenset(c.name for c in unit.contracts)
    for contract in unit.contracts:
        for var in contract.state_vars:
            if var.initializer is not None:
                var.initializer = _transform(var.initializer, declared)
        for fn in contract.functions:
            for item in fn.header_items:
                if isinstance(item, ModifierInvocation) and item.args:
                    item.args = [_transform(a, declared) for a in item.args]
            if fn.body is not None:
                _normalize_body(fn.body, declared)
        for mod in contract.modifiers:
            if mod.body is not None:
                _normalize_body(mod.body, declared)
    return unit
