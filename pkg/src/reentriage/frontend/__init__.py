"""Solidity source frontend: lexing, parsing, call-form normalization."""

from .ast_nodes import (  # noqa: F401
    Assignment, Binary, Block, BreakStmt, Call, CallKind, CallOption,
    Conditional, ContinueStmt, ContractDef, Diagnostic, Expr, ExprStmt,
    EXTERNAL_CALL_KINDS, ForStmt, FunctionDef, Identifier, IfStmt,
    IndexAccess, Literal, LocalVarDecl, MemberAccess, ModifierDef,
    ModifierInvocation, MsgSender, MsgValue, NewExpr, OpaqueStmt, Param,
    PlaceholderStmt, RawDirective, RequireStmt, ReturnStmt, RevertStmt,
    SkippedDecl, SourceUnit, Span, StateVarDef, Stmt, ThisRef, TupleExpr,
    TypeCast, Unary, WhileStmt, walk_all_exprs, walk_expr, walk_stmts,
)
from .normalize import normalize_call_forms  # noqa: F401
from .parser import DEFAULT_MAX_SOURCE_BYTES, parse_source  # noqa: F401
from .tokens import Token, TokenKind, tokenize  # noqa: F401
from .unparse import unparse  # noqa: F401
