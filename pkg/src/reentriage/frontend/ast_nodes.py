"""AST for the supported Solidity subset.

Nodes keep enough source fidelity for span-faithful reporting and for
token-level round-tripping: every node carries a Span, expressions record
redundant parentheses, call-option sugar remembers which spelling it came
from. Type annotations are kept as token text, not modeled structurally;
the analyzer only ever pattern-matches on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    offset: int
    end_offset: int


DUMMY_SPAN = Span(0, 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    message: str
    line: int
    column: int
    severity: str = "error"  # "error" | "warning"


class CallKind(Enum):
    LOW_LEVEL_CALL = "low_level_call"
    TRANSFER = "transfer"
    SEND = "send"
    EXTERNAL_MEMBER_CALL = "external_member_call"
    DELEGATECALL = "delegatecall"


EXTERNAL_CALL_KINDS = frozenset(CallKind)
CALL_KIND_NAMES = tuple(k.value for k in CallKind)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass
class Expr:
    span: Span = field(default=DUMMY_SPAN, kw_only=True)
    # number of redundant () wrappers present in the source
    paren_depth: int = field(default=0, kw_only=True)


@dataclass
class Identifier(Expr):
    name: str = ""


@dataclass
class MsgSender(Expr):
    pass


@dataclass
class MsgValue(Expr):
    pass


@dataclass
class ThisRef(Expr):
    pass


@dataclass
class Literal(Expr):
    kind: str = "number"  # "number" | "address" | "string" | "bool"
    text: str = ""        # verbatim source text (checksummed addresses survive)
    unit: Optional[str] = None  # ether/wei/days/... suffix when present

    def is_zero(self) -> bool:
        if self.kind not in ("number", "address"):
            return False
        t = self.text.lower().replace("_", "")
        try:
            return int(t, 16 if t.startswith("0x") else 10) == 0
        except ValueError:
            return False


@dataclass
class MemberAccess(Expr):
    base: Expr = field(default_factory=Expr)
    member: str = ""


@dataclass
class IndexAccess(Expr):
    base: Expr = field(default_factory=Expr)
    index: Optional[Expr] = None


@dataclass
class CallOption:
    name: str  # "value" | "gas" | "salt"
    value: Expr


@dataclass
class Call(Expr):
    callee: Expr = field(default_factory=Expr)
    args: list[Expr] = field(default_factory=list)
    call_kind: Optional[CallKind] = None
    # value/gas options in source order; style records the spelling:
    # "legacy" = .value(x).gas(y) chain, "braces" = {value: x, gas: y}
    options: list[CallOption] = field(default_factory=list)
    options_style: Optional[str] = None

    def _option(self, name: str) -> Optional[Expr]:
        for opt in self.options:
            if opt.name == name:
                return opt.value
        return None

    @property
    def value_slot(self) -> Optional[Expr]:
        """Ether amount the call forwards, whatever the spelling."""
        if self.call_kind in (CallKind.TRANSFER, CallKind.SEND) and self.args:
            return self.args[0]
        return self._option("value")

    @property
    def gas_slot(self) -> Optional[Expr]:
        return self._option("gas")


@dataclass
class NewExpr(Expr):
    type_text: str = ""
    args: list[Expr] = field(default_factory=list)


@dataclass
class TypeCast(Expr):
    type_name: str = ""
    operand: Expr = field(default_factory=Expr)


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr = field(default_factory=Expr)
    right: Expr = field(default_factory=Expr)


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr = field(default_factory=Expr)
    prefix: bool = True


@dataclass
class Conditional(Expr):
    condition: Expr = field(default_factory=Expr)
    if_true: Expr = field(default_factory=Expr)
    if_false: Expr = field(default_factory=Expr)


@dataclass
class TupleExpr(Expr):
    items: list[Expr] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass
class Stmt:
    span: Span = field(default=DUMMY_SPAN, kw_only=True)


@dataclass
class Block(Stmt):
    statements: list[Stmt] = field(default_factory=list)
    # single-statement if/loop bodies have no braces in the source
    braced: bool = True
    # 0.8 `unchecked { ... }`; wrapping is irrelevant to call analysis
    unchecked: bool = False


@dataclass
class IfStmt(Stmt):
    condition: Expr = field(default_factory=Expr)
    then_branch: Block = field(default_factory=Block)
    else_branch: Optional[Block] = None


@dataclass
class WhileStmt(Stmt):
    condition: Expr = field(default_factory=Expr)
    body: Block = field(default_factory=Block)
    check_after: bool = False  # do { } while (...)


@dataclass
class ForStmt(Stmt):
    init: Optional[Stmt] = None
    condition: Optional[Expr] = None
    post: Optional[Stmt] = None
    body: Block = field(default_factory=Block)


@dataclass
class RequireStmt(Stmt):
    """require(...) / assert(...) used as a statement."""
    name: str = "require"
    condition: Expr = field(default_factory=Expr)
    message: Optional[Expr] = None


@dataclass
class RevertStmt(Stmt):
    keyword: str = "revert"  # "revert" | "throw"
    error_call: Optional[Expr] = None  # revert("why") / revert Custom(...)


@dataclass
class ReturnStmt(Stmt):
    value: Optional[Expr] = None


@dataclass
class BreakStmt(Stmt):
    pass


@dataclass
class ContinueStmt(Stmt):
    pass


@dataclass
class PlaceholderStmt(Stmt):
    """The `_;` body slot inside a modifier."""


@dataclass
class LocalVarDecl(Stmt):
    type_text: str = ""
    location: Optional[str] = None  # memory/storage/calldata
    name: str = ""
    initializer: Optional[Expr] = None


@dataclass
class Assignment(Stmt):
    target: Expr = field(default_factory=Expr)
    op: str = "="  # "=", "+=", ..., "++", "--", "delete"
    value: Optional[Expr] = None


@dataclass
class ExprStmt(Stmt):
    expr: Expr = field(default_factory=Expr)


@dataclass
class OpaqueStmt(Stmt):
    """A region the parser gave up on; treated as an unknown state write."""
    raw_text: str = ""
    reason: str = ""


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass
class Param:
    type_text: str
    name: str = ""
    location: Optional[str] = None
    span: Span = DUMMY_SPAN


@dataclass
class ModifierInvocation:
    name: str
    args: Optional[list[Expr]] = None  # None: no parens written
    span: Span = DUMMY_SPAN


# ordered function-header attribute: a bare keyword or a modifier use
HeaderItem = Union[str, ModifierInvocation]

_VISIBILITIES = ("public", "private", "internal", "external")
_MUTABILITIES = ("pure", "view", "payable", "constant")


@dataclass
class FunctionDef:
    name: str  # "" for fallback/receive
    params: list[Param] = field(default_factory=list)
    returns: list[Param] = field(default_factory=list)
    header_items: list[HeaderItem] = field(default_factory=list)
    body: Optional[Block] = None  # None: declaration without body
    fn_kind: str = "function"  # "function"|"constructor"|"fallback"|"receive"
    # pre-0.5 constructors are functions named after their contract
    ctor_style: Optional[str] = None  # "keyword" | "named"
    # leading keyword as written: function/constructor/fallback/receive
    declared_with: str = "function"
    span: Span = DUMMY_SPAN

    @property
    def is_constructor(self) -> bool:
        return self.fn_kind == "constructor"

    @property
    def visibility(self) -> str:
        for item in self.header_items:
            if isinstance(item, str) and item in _VISIBILITIES:
                return item
        return "public"  # pre-0.5 default

    @property
    def mutability(self) -> Optional[str]:
        for item in self.header_items:
            if isinstance(item, str) and item in _MUTABILITIES:
                return "view" if item == "constant" else item
        return None

    @property
    def modifiers(self) -> list[ModifierInvocation]:
        return [m for m in self.header_items
                if isinstance(m, ModifierInvocation) and m.name != "override"]


@dataclass
class ModifierDef:
    name: str
    params: list[Param] = field(default_factory=list)
    header_items: list[HeaderItem] = field(default_factory=list)
    body: Optional[Block] = None
    paren_params: bool = True  # `modifier onlyOwner {` omits the parens
    span: Span = DUMMY_SPAN


@dataclass
class StateVarDef:
    name: str
    type_text: str
    attrs: list[str] = field(default_factory=list)  # visibility/constant/immutable/...
    initializer: Optional[Expr] = None
    span: Span = DUMMY_SPAN

    @property
    def visibility(self) -> str:
        for attr in self.attrs:
            if attr in _VISIBILITIES:
                return attr
        return "internal"

    @property
    def is_fixed_declared(self) -> bool:
        """Declared constant or immutable."""
        return "constant" in self.attrs or "immutable" in self.attrs


@dataclass
class SkippedDecl:
    """A declaration the analyzer does not model (event, struct, enum,
    using, custom error, recovered garbage). Raw text is kept so a
    contract still round-trips token-for-token."""
    raw_text: str
    span: Span = DUMMY_SPAN


ContractMember = Union[StateVarDef, FunctionDef, ModifierDef, SkippedDecl]


@dataclass
class ContractDef:
    name: str
    kind: str = "contract"  # "contract" | "interface" | "library"
    bases: list[str] = field(default_factory=list)
    # constructor args written at each base, aligned with bases; None when
    # no parens were written
    base_args: list[Optional[list[Expr]]] = field(default_factory=list)
    members: list[ContractMember] = field(default_factory=list)
    is_abstract: bool = False
    span: Span = DUMMY_SPAN

    @property
    def state_vars(self) -> list[StateVarDef]:
        return [m for m in self.members if isinstance(m, StateVarDef)]

    @property
    def functions(self) -> list[FunctionDef]:
        return [m for m in self.members if isinstance(m, FunctionDef)]

    @property
    def modifiers(self) -> list[ModifierDef]:
        return [m for m in self.members if isinstance(m, ModifierDef)]


@dataclass
class RawDirective:
    """A file-level line kept only as text (pragma, import, skipped items)."""
    raw_text: str
    span: Span = DUMMY_SPAN


@dataclass
class SourceUnit:
    path: str
    pragma: Optional[str] = None  # version text of the first solidity pragma
    items: list[Union[RawDirective, ContractDef]] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def contracts(self) -> list[ContractDef]:
        return [i for i in self.items if isinstance(i, ContractDef)]


# ---------------------------------------------------------------------------
# Tree walking helpers
# ---------------------------------------------------------------------------

def expr_children(expr: Expr) -> Iterator[Expr]:
    if isinstance(expr, MemberAccess):
        yield expr.base
    elif isinstance(expr, IndexAccess):
        yield expr.base
        if expr.index is not None:
            yield expr.index
    elif isinstance(expr, Call):
        yield expr.callee
        for opt in expr.options:
            yield opt.value
        yield from expr.args
    elif isinstance(expr, NewExpr):
        yield from expr.args
    elif isinstance(expr, TypeCast):
        yield expr.operand
    elif isinstance(expr, Binary):
        yield expr.left
        yield expr.right
    elif isinstance(expr, Unary):
        yield expr.operand
    elif isinstance(expr, Conditional):
        yield expr.condition
        yield expr.if_true
        yield expr.if_false
    elif isinstance(expr, TupleExpr):
        yield from expr.items


def walk_expr(expr: Expr) -> Iterator[Expr]:
    """The expression and every descendant, preorder."""
    yield expr
    for child in expr_children(expr):
        yield from walk_expr(child)


def stmt_exprs(stmt: Stmt) -> Iterator[Expr]:
    """Top-level expressions directly held by one statement."""
    if isinstance(stmt, IfStmt):
        yield stmt.condition
    elif isinstance(stmt, (WhileStmt,)):
        yield stmt.condition
    elif isinstance(stmt, ForStmt):
        if stmt.condition is not None:
            yield stmt.condition
    elif isinstance(stmt, RequireStmt):
        yield stmt.condition
        if stmt.message is not None:
            yield stmt.message
    elif isinstance(stmt, RevertStmt):
        if stmt.error_call is not None:
            yield stmt.error_call
    elif isinstance(stmt, ReturnStmt):
        if stmt.value is not None:
            yield stmt.value
    elif isinstance(stmt, LocalVarDecl):
        if stmt.initializer is not None:
            yield stmt.initializer
    elif isinstance(stmt, Assignment):
        yield stmt.target
        if stmt.value is not None:
            yield stmt.value
    elif isinstance(stmt, ExprStmt):
        yield stmt.expr


def stmt_children(stmt: Stmt) -> Iterator[Stmt]:
    if isinstance(stmt, Block):
        yield from stmt.statements
    elif isinstance(stmt, IfStmt):
        yield stmt.then_branch
        if stmt.else_branch is not None:
            yield stmt.else_branch
    elif isinstance(stmt, WhileStmt):
        yield stmt.body
    elif isinstance(stmt, ForStmt):
        if stmt.init is not None:
            yield stmt.init
        if stmt.post is not None:
            yield stmt.post
        yield stmt.body


def walk_stmts(stmt: Stmt) -> Iterator[Stmt]:
    """The statement and every nested statement, preorder."""
    yield stmt
    for child in stmt_children(stmt):
        yield from walk_stmts(child)


def walk_all_exprs(stmt: Stmt) -> Iterator[Expr]:
    """Every expression anywhere under a statement tree."""
    for s in walk_stmts(stmt):
        for top in stmt_exprs(s):
            yield from walk_expr(top)


def expr_slots(stmt: Stmt) -> list[tuple[object, str]]:
    """(holder, attribute) pairs for every direct expression slot of a
    statement; lets callers rewrite expressions in place via setattr."""
    slots: list[tuple[object, str]] = []
    if isinstance(stmt, (IfStmt, WhileStmt)):
        slots.append((stmt, "condition"))
    elif isinstance(stmt, ForStmt):
        if stmt.condition is not None:
            slots.append((stmt, "condition"))
    elif isinstance(stmt, RequireStmt):
        slots.append((stmt, "condition"))
        if stmt.message is not None:
            slots.append((stmt, "message"))
    elif isinstance(stmt, RevertStmt):
        if stmt.error_call is not None:
            slots.append((stmt, "error_call"))
    elif isinstance(stmt, ReturnStmt):
        if stmt.value is not None:
            slots.append((stmt, "value"))
    elif isinstance(stmt, LocalVarDecl):
        if stmt.initializer is not None:
            slots.append((stmt, "initializer"))
    elif isinstance(stmt, Assignment):
        slots.append((stmt, "target"))
        if stmt.value is not None:
            slots.append((stmt, "value"))
    elif isinstance(stmt, ExprStmt):
        slots.append((stmt, "expr"))
    return slots


def join_tokens(parts: list[str]) -> str:
    """Join token texts into readable text that re-lexes identically."""
    out: list[str] = []
    no_space_before = {")", "]", ",", ";", "."}
    no_space_after = {"(", "[", "."}
    for part in parts:
        if out and part not in no_space_before and out[-1] not in no_space_after:
            out.append(" ")
        out.append(part)
    return "".join(out)
