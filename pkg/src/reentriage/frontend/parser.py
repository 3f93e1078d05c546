"""Recursive-descent parser for the supported Solidity subset.

Design rules:

* Accepts the 0.4.x through 0.8.x surface relevant to call/state analysis.
  Pre-0.5 spellings are normalized at parse time (`throw` becomes a revert
  statement, `constant` on functions means `view`, a function named after
  its contract is a constructor).
* Never dies on one bad statement. Anything unparseable is captured as an
  OpaqueStmt holding the raw text, with a diagnostic; downstream analysis
  treats opaque regions as unknown state writes.
* Only brace imbalance is fatal (FatalSyntax): without matching closers
  there is no structure left to recover to.
* Constructs irrelevant to the analysis (events, structs, enums, using,
  custom errors) are consumed without being modeled. Inline assembly,
  try/catch, tuple destructuring and `emit` become opaque statements.
"""

from __future__ import annotations

import re
import sys

from ..errors import UnreadableInput
from ..timing import Deadline
from .ast_nodes import (
    Assignment, Binary, Block, BreakStmt, Call, CallOption, Conditional,
    ContinueStmt, ContractDef, Diagnostic, Expr, ExprStmt, ForStmt,
    FunctionDef, Identifier, IfStmt, IndexAccess, Literal, LocalVarDecl,
    MemberAccess, ModifierDef, ModifierInvocation, MsgSender, MsgValue,
    NewExpr, OpaqueStmt, Param, PlaceholderStmt, RawDirective, RequireStmt,
    ReturnStmt, RevertStmt, SkippedDecl, Span, StateVarDef, Stmt, ThisRef,
    TupleExpr, TypeCast, Unary, WhileStmt, join_tokens,
)
from .tokens import Token, TokenKind, check_brace_balance, tokenize

DEFAULT_MAX_SOURCE_BYTES = 2 * 1024 * 1024

_ETHER_UNITS = frozenset(
    ["wei", "gwei", "szabo", "finney", "ether",
     "seconds", "minutes", "hours", "days", "weeks", "years"])

_VISIBILITY_KWS = frozenset(["public", "private", "internal", "external"])
_MUTABILITY_KWS = frozenset(["pure", "view", "payable", "constant"])
_LOCATION_KWS = frozenset(["memory", "storage", "calldata"])
_STATE_VAR_ATTRS = frozenset(
    ["public", "private", "internal", "constant", "immutable", "transient"])

_ELEMENTARY_RE = re.compile(
    r"^(address|bool|string|var|byte|bytes([1-9]|[12][0-9]|3[0-2])?"
    r"|u?int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|136|144|152"
    r"|160|168|176|184|192|200|208|216|224|232|240|248|256)?"
    r"|u?fixed[0-9x]*)$")

_ASSIGN_OPS = frozenset(
    ["=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>="])

_MAX_EXPR_DEPTH = 64
_MAX_STMT_DEPTH = 120


def is_elementary_type(text: str) -> bool:
    return bool(_ELEMENTARY_RE.match(text))


class ParseError(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


def _ensure_recursion_headroom() -> None:
    # deep paren/operator nests cost ~15 frames per level in the
    # descent chain; the depth caps keep us well under this limit
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)


class Parser:
    def __init__(self, tokens: list[Token], source: str, path: str,
                 deadline: Deadline):
        self.tokens = tokens
        self.source = source
        self.path = path
        self.deadline = deadline
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self._expr_depth = 0
        self._stmt_depth = 0

    # -- token plumbing -----------------------------------------------------

    def _cur(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, ahead: int = 1) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def _at_end(self) -> bool:
        return self._cur().kind is TokenKind.EOF

    def _advance(self) -> Token:
        tok = self._cur()
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def _at(self, text: str) -> bool:
        return self._cur().text == text and self._cur().kind is not TokenKind.STRING

    def _accept(self, text: str) -> bool:
        if self._at(text):
            self.pos += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise ParseError(f"expected {text!r}, found {self._cur().text!r}",
                             self._cur())
        return self._advance()

    def _expect_ident(self) -> Token:
        tok = self._cur()
        if tok.kind is not TokenKind.IDENTIFIER:
            raise ParseError(f"expected identifier, found {tok.text!r}", tok)
        return self._advance()

    def _span_from(self, start_index: int) -> Span:
        start = self.tokens[start_index]
        last_index = max(start_index, self.pos - 1)
        end = self.tokens[last_index]
        return Span(start.line, start.column, start.offset,
                    max(start.offset, end.end_offset))

    def _diag(self, message: str, token: Token, severity: str = "error") -> None:
        self.diagnostics.append(
            Diagnostic(message, token.line, token.column, severity))

    # -- recovery -----------------------------------------------------------

    def _skip_balanced(self) -> None:
        """Consume one token; if it opens a bracket, consume to its match."""
        openers = {"{": "}", "(": ")", "[": "]"}
        tok = self._advance()
        closer = openers.get(tok.text)
        if closer is None or tok.kind is TokenKind.STRING:
            return
        depth = 1
        while not self._at_end() and depth > 0:
            t = self._advance()
            if t.kind is TokenKind.STRING:
                continue
            if t.text in openers:
                depth += 1
            elif t.text in ("}", ")", "]"):
                depth -= 1

    def _skip_to_semicolon(self) -> None:
        """Consume up to and including the next ';' at this nesting level.

        Stops before a '}' that would close the enclosing block.
        """
        while not self._at_end():
            tok = self._cur()
            if tok.kind is not TokenKind.STRING:
                if tok.text == ";":
                    self._advance()
                    return
                if tok.text == "}":
                    return
                if tok.text in ("{", "(", "["):
                    self._skip_balanced()
                    continue
            self._advance()

    def _recover_opaque(self, start_index: int, reason: str) -> OpaqueStmt:
        self.pos = max(self.pos, start_index)
        if self.pos == start_index and (self._at("}") or self._at_end()):
            # nothing to capture; emit an empty marker so the caller
            # still makes progress
            span = self._span_from(start_index)
            return OpaqueStmt(raw_text="", reason=reason, span=span)
        self.pos = start_index
        self._skip_to_semicolon()
        if self.pos == start_index:
            self._advance()
        span = self._span_from(start_index)
        raw = self.source[span.offset:span.end_offset]
        return OpaqueStmt(raw_text=raw, reason=reason, span=span)

    # -- types --------------------------------------------------------------

    def _parse_type_tokens(self) -> list[str]:
        parts: list[str] = []
        tok = self._cur()
        if tok.text == "mapping":
            parts.append(self._advance().text)
            parts.append(self._expect("(").text)
            depth = 1
            while not self._at_end() and depth > 0:
                t = self._advance()
                if t.text == "(" and t.kind is not TokenKind.STRING:
                    depth += 1
                elif t.text == ")" and t.kind is not TokenKind.STRING:
                    depth -= 1
                parts.append(t.text)
        elif tok.kind is TokenKind.IDENTIFIER:
            parts.append(self._advance().text)
            if parts[0] == "address" and self._at("payable"):
                parts.append(self._advance().text)
            while self._at(".") and self._peek().kind is TokenKind.IDENTIFIER:
                parts.append(self._advance().text)
                parts.append(self._advance().text)
        else:
            raise ParseError(f"expected type, found {tok.text!r}", tok)
        while self._at("["):
            parts.append(self._advance().text)
            depth = 1
            while not self._at_end() and depth > 0:
                t = self._advance()
                if t.text == "[" and t.kind is not TokenKind.STRING:
                    depth += 1
                elif t.text == "]" and t.kind is not TokenKind.STRING:
                    depth -= 1
                parts.append(t.text)
        return parts

    def _parse_params(self) -> list[Param]:
        params: list[Param] = []
        self._expect("(")
        while not self._at(")") and not self._at_end():
            start = self.pos
            type_parts = self._parse_type_tokens()
            location = None
            if self._cur().text in _LOCATION_KWS:
                location = self._advance().text
            if self._at("indexed"):  # event params; harmless to accept
                self._advance()
            name = ""
            if self._cur().kind is TokenKind.IDENTIFIER and \
                    self._cur().text not in (",", ")"):
                name = self._advance().text
            params.append(Param(join_tokens(type_parts), name, location,
                                self._span_from(start)))
            if not self._accept(","):
                break
        self._expect(")")
        return params

    # -- expressions ----------------------------------------------------------

    def _parse_expression(self) -> Expr:
        self._expr_depth += 1
        try:
            if self._expr_depth > _MAX_EXPR_DEPTH:
                raise ParseError("expression nested too deeply", self._cur())
            return self._parse_conditional()
        finally:
            self._expr_depth -= 1

    def _parse_conditional(self) -> Expr:
        start = self.pos
        cond = self._parse_binary(0)
        if self._accept("?"):
            if_true = self._parse_expression()
            self._expect(":")
            if_false = self._parse_expression()
            return Conditional(cond, if_true, if_false,
                               span=self._span_from(start))
        return cond

    # binary precedence tiers, loosest first
    _BINARY_TIERS = [
        ["||"], ["&&"], ["==", "!="], ["<", ">", "<=", ">="],
        ["|"], ["^"], ["&"], ["<<", ">>"], ["+", "-"], ["*", "/", "%"],
    ]

    def _parse_binary(self, tier: int) -> Expr:
        if tier >= len(self._BINARY_TIERS):
            return self._parse_power()
        start = self.pos
        left = self._parse_binary(tier + 1)
        ops = self._BINARY_TIERS[tier]
        while self._cur().kind is TokenKind.PUNCT and self._cur().text in ops:
            op = self._advance().text
            right = self._parse_binary(tier + 1)
            left = Binary(op, left, right, span=self._span_from(start))
        return left

    def _parse_power(self) -> Expr:
        start = self.pos
        base = self._parse_unary()
        if self._at("**"):
            self._advance()
            exponent = self._parse_power()  # right associative
            return Binary("**", base, exponent, span=self._span_from(start))
        return base

    def _parse_unary(self) -> Expr:
        tok = self._cur()
        if tok.kind is TokenKind.PUNCT and tok.text in ("!", "~", "-", "+", "++", "--"):
            start = self.pos
            op = self._advance().text
            operand = self._parse_unary()
            return Unary(op, operand, prefix=True, span=self._span_from(start))
        return self._parse_postfix()

    def _parse_call_args(self) -> list[Expr]:
        args: list[Expr] = []
        self._expect("(")
        while not self._at(")") and not self._at_end():
            args.append(self._parse_expression())
            if not self._accept(","):
                break
        self._expect(")")
        return args

    def _parse_postfix(self) -> Expr:
        start = self.pos
        expr = self._parse_primary()
        while True:
            tok = self._cur()
            if tok.kind is TokenKind.STRING:
                break
            if tok.text == ".":
                self._advance()
                member = self._expect_ident().text
                if isinstance(expr, Identifier) and expr.name == "msg":
                    if member == "sender":
                        expr = MsgSender(span=self._span_from(start))
                        continue
                    if member == "value":
                        expr = MsgValue(span=self._span_from(start))
                        continue
                expr = MemberAccess(expr, member, span=self._span_from(start))
            elif tok.text == "[":
                self._advance()
                index = None
                if not self._at("]"):
                    index = self._parse_expression()
                self._expect("]")
                expr = IndexAccess(expr, index, span=self._span_from(start))
            elif tok.text == "(":
                args = self._parse_call_args()
                expr = Call(expr, args, span=self._span_from(start))
            elif tok.text == "{" and self._looks_like_call_options():
                options = self._parse_call_options()
                args = self._parse_call_args()
                expr = Call(expr, args, options=options,
                            options_style="braces",
                            span=self._span_from(start))
            elif tok.text in ("++", "--"):
                self._advance()
                expr = Unary(tok.text, expr, prefix=False,
                             span=self._span_from(start))
            else:
                break
        return expr

    def _looks_like_call_options(self) -> bool:
        # callee{value: ..., gas: ...}(args) -- a '{' is only call sugar
        # when 'ident :' follows
        return (self._peek(1).kind is TokenKind.IDENTIFIER
                and self._peek(2).text == ":")

    def _parse_call_options(self) -> list[CallOption]:
        options: list[CallOption] = []
        self._expect("{")
        while not self._at("}") and not self._at_end():
            name = self._expect_ident().text
            self._expect(":")
            options.append(CallOption(name, self._parse_expression()))
            if not self._accept(","):
                break
        self._expect("}")
        return options

    def _parse_primary(self) -> Expr:
        tok = self._cur()
        start = self.pos
        if tok.kind is TokenKind.NUMBER:
            self._advance()
            kind = "address" if (tok.text.lower().startswith("0x")
                                 and len(tok.text) == 42) else "number"
            unit = None
            if (kind == "number" and self._cur().kind is TokenKind.IDENTIFIER
                    and self._cur().text in _ETHER_UNITS):
                unit = self._advance().text
            return Literal(kind, tok.text, unit, span=self._span_from(start))
        if tok.kind is TokenKind.STRING:
            self._advance()
            return Literal("string", tok.text, span=self._span_from(start))
        if tok.kind is TokenKind.IDENTIFIER:
            if tok.text in ("true", "false"):
                self._advance()
                return Literal("bool", tok.text, span=self._span_from(start))
            if tok.text == "this":
                self._advance()
                return ThisRef(span=self._span_from(start))
            if tok.text == "new":
                self._advance()
                type_parts = self._parse_type_tokens()
                args = self._parse_call_args() if self._at("(") else []
                return NewExpr(join_tokens(type_parts), args,
                               span=self._span_from(start))
            if is_elementary_type(tok.text) or tok.text == "payable":
                # `address(0)` / `payable(x)` / `uint(y)` casts
                if self._peek(1).text == "(":
                    name = self._advance().text
                    self._expect("(")
                    operand = self._parse_expression()
                    self._expect(")")
                    return TypeCast(name, operand, span=self._span_from(start))
            self._advance()
            return Identifier(tok.text, span=self._span_from(start))
        if tok.text == "(":
            self._advance()
            if self._at(")"):
                raise ParseError("empty parenthesized expression", tok)
            inner = self._parse_expression()
            if self._at(","):
                items = [inner]
                while self._accept(","):
                    if self._at(")"):
                        break
                    items.append(self._parse_expression())
                self._expect(")")
                return TupleExpr(items, span=self._span_from(start))
            self._expect(")")
            inner.paren_depth += 1
            return inner
        raise ParseError(f"expected expression, found {tok.text!r}", tok)

    # -- statements -----------------------------------------------------------

    def _parse_block(self) -> Block:
        start = self.pos
        self._expect("{")
        statements: list[Stmt] = []
        while not self._at("}") and not self._at_end():
            self.deadline.check()
            statements.append(self._statement_with_recovery())
        self._expect("}")
        return Block(statements, braced=True, span=self._span_from(start))

    def _parse_body_stmt(self) -> Block:
        """A loop/if arm: either a braced block or a single statement."""
        if self._at("{"):
            return self._parse_block()
        start = self.pos
        stmt = self._statement_with_recovery()
        return Block([stmt], braced=False, span=self._span_from(start))

    def _statement_with_recovery(self) -> Stmt:
        start = self.pos
        try:
            self._stmt_depth += 1
            if self._stmt_depth > _MAX_STMT_DEPTH:
                raise ParseError("statements nested too deeply", self._cur())
            return self._parse_statement()
        except ParseError as err:
            self._diag(err.message, err.token)
            return self._recover_opaque(start, err.message)
        finally:
            self._stmt_depth -= 1

    def _parse_statement(self) -> Stmt:
        tok = self._cur()
        start = self.pos
        if tok.text == "{" and tok.kind is TokenKind.PUNCT:
            return self._parse_block()
        if tok.kind is TokenKind.IDENTIFIER:
            handler = {
                "if": self._parse_if,
                "while": self._parse_while,
                "do": self._parse_do_while,
                "for": self._parse_for,
                "return": self._parse_return,
                "require": self._parse_require,
                "assert": self._parse_require,
                "revert": self._parse_revert,
            }.get(tok.text)
            if handler is not None:
                return handler()
            if tok.text == "throw":
                self._advance()
                self._expect(";")
                return RevertStmt(keyword="throw", span=self._span_from(start))
            if tok.text == "break":
                self._advance()
                self._expect(";")
                return BreakStmt(span=self._span_from(start))
            if tok.text == "continue":
                self._advance()
                self._expect(";")
                return ContinueStmt(span=self._span_from(start))
            if tok.text == "_" and self._peek().text == ";":
                self._advance()
                self._advance()
                return PlaceholderStmt(span=self._span_from(start))
            if tok.text == "delete":
                self._advance()
                target = self._parse_expression()
                self._expect(";")
                return Assignment(target, "delete", None,
                                  span=self._span_from(start))
            if tok.text == "emit":
                # events carry no state; still treated opaquely
                return self._recover_opaque(start, "emit statement")
            if tok.text == "assembly":
                self._advance()
                if self._cur().kind is TokenKind.STRING:
                    self._advance()  # assembly "evmasm" { ... }
                if self._at("{"):
                    self._skip_balanced()
                span = self._span_from(start)
                raw = self.source[span.offset:span.end_offset]
                self._diag("inline assembly treated as opaque", tok, "warning")
                return OpaqueStmt(raw_text=raw, reason="inline assembly",
                                  span=span)
            if tok.text == "try":
                return self._parse_try_opaque()
            if tok.text == "unchecked" and self._peek().text == "{":
                self._advance()
                inner = self._parse_block()
                # arithmetic wrapping is irrelevant here; keep the block
                inner.span = self._span_from(start)
                inner.unchecked = True
                return inner
            decl = self._try_parse_local_decl()
            if decl is not None:
                return decl
        return self._parse_expr_statement()

    def _parse_if(self) -> Stmt:
        start = self.pos
        self._advance()
        self._expect("(")
        condition = self._parse_expression()
        self._expect(")")
        then_branch = self._parse_body_stmt()
        else_branch = None
        if self._accept("else"):
            else_branch = self._parse_body_stmt()
        return IfStmt(condition, then_branch, else_branch,
                      span=self._span_from(start))

    def _parse_while(self) -> Stmt:
        start = self.pos
        self._advance()
        self._expect("(")
        condition = self._parse_expression()
        self._expect(")")
        body = self._parse_body_stmt()
        return WhileStmt(condition, body, check_after=False,
                         span=self._span_from(start))

    def _parse_do_while(self) -> Stmt:
        start = self.pos
        self._advance()
        body = self._parse_body_stmt()
        self._expect("while")
        self._expect("(")
        condition = self._parse_expression()
        self._expect(")")
        self._expect(";")
        return WhileStmt(condition, body, check_after=True,
                         span=self._span_from(start))

    def _parse_for(self) -> Stmt:
        start = self.pos
        self._advance()
        self._expect("(")
        init: Stmt | None = None
        if not self._at(";"):
            init = self._try_parse_local_decl(consume_semi=False)
            if init is None:
                init = self._expr_or_assignment(consume_semi=False)
        self._expect(";")
        condition = None
        if not self._at(";"):
            condition = self._parse_expression()
        self._expect(";")
        post: Stmt | None = None
        if not self._at(")"):
            post = self._expr_or_assignment(consume_semi=False)
        self._expect(")")
        body = self._parse_body_stmt()
        return ForStmt(init, condition, post, body,
                       span=self._span_from(start))

    def _parse_return(self) -> Stmt:
        start = self.pos
        self._advance()
        value = None
        if not self._at(";"):
            value = self._parse_expression()
        self._expect(";")
        return ReturnStmt(value, span=self._span_from(start))

    def _parse_require(self) -> Stmt:
        start = self.pos
        name = self._advance().text
        self._expect("(")
        condition = self._parse_expression()
        message = None
        if self._accept(","):
            message = self._parse_expression()
        self._expect(")")
        self._expect(";")
        return RequireStmt(name, condition, message,
                           span=self._span_from(start))

    def _parse_revert(self) -> Stmt:
        start = self.pos
        self._advance()
        error_call: Expr | None = None
        if self._at("("):
            self._advance()
            if not self._at(")"):
                error_call = self._parse_expression()
            self._expect(")")
        elif self._cur().kind is TokenKind.IDENTIFIER:
            error_call = self._parse_postfix()  # revert CustomError(args)
        self._expect(";")
        return RevertStmt("revert", error_call, span=self._span_from(start))

    def _parse_try_opaque(self) -> Stmt:
        start = self.pos
        tok = self._cur()
        self._advance()
        # consume: try <expr> [returns (...)] { ... } catch ... { ... }
        while not self._at_end():
            if self._at("{"):
                self._skip_balanced()
                if not self._at("catch"):
                    break
            else:
                self._advance()
        span = self._span_from(start)
        raw = self.source[span.offset:span.end_offset]
        self._diag("try/catch treated as opaque", tok, "warning")
        return OpaqueStmt(raw_text=raw, reason="try/catch", span=span)

    def _try_parse_local_decl(self, consume_semi: bool = True) -> LocalVarDecl | None:
        """Parse `Type [loc] name [= init]` if the lookahead shape matches."""
        tok = self._cur()
        if tok.kind is not TokenKind.IDENTIFIER:
            return None
        looks_typeish = (is_elementary_type(tok.text) or tok.text == "mapping"
                         or tok.kind is TokenKind.IDENTIFIER)
        if not looks_typeish:
            return None
        saved = self.pos
        try:
            type_parts = self._parse_type_tokens()
        except ParseError:
            self.pos = saved
            return None
        location = None
        if self._cur().text in _LOCATION_KWS:
            location = self._advance().text
        if (self._cur().kind is not TokenKind.IDENTIFIER
                or self._peek().text not in ("=", ";", ")", ",")):
            self.pos = saved
            return None
        # a cast like `uint(x)` never reaches here: after a bare type the
        # next token would be '(' and the name check above rejects it
        name = self._advance().text
        initializer = None
        if self._accept("="):
            initializer = self._parse_expression()
        if consume_semi:
            self._expect(";")
        return LocalVarDecl(join_tokens(type_parts), location, name,
                            initializer, span=self._span_from(saved))

    def _expr_or_assignment(self, consume_semi: bool = True) -> Stmt:
        start = self.pos
        expr = self._parse_expression()
        if isinstance(expr, TupleExpr) and self._cur().text in _ASSIGN_OPS:
            raise ParseError("tuple destructuring not modeled", self._cur())
        if self._cur().kind is TokenKind.PUNCT and self._cur().text in _ASSIGN_OPS:
            op = self._advance().text
            value = self._parse_expression()
            if consume_semi:
                self._expect(";")
            return Assignment(expr, op, value, span=self._span_from(start))
        if consume_semi:
            self._expect(";")
        return ExprStmt(expr, span=self._span_from(start))

    def _parse_expr_statement(self) -> Stmt:
        return self._expr_or_assignment(consume_semi=True)

    # -- declarations ---------------------------------------------------------

    def _parse_header_items(self, returns_out: list[Param]) -> list:
        items: list = []
        while not self._at_end():
            tok = self._cur()
            if tok.kind is not TokenKind.IDENTIFIER:
                break
            text = tok.text
            if text in _VISIBILITY_KWS or text in _MUTABILITY_KWS or text == "virtual":
                self._advance()
                items.append(text)
            elif text == "override":
                start = self.pos
                self._advance()
                if self._at("("):
                    args: list[Expr] = []
                    self._advance()
                    while not self._at(")") and not self._at_end():
                        args.append(Identifier(self._expect_ident().text))
                        if not self._accept(","):
                            break
                    self._expect(")")
                    items.append(ModifierInvocation("override", args,
                                                    self._span_from(start)))
                else:
                    items.append("override")
            elif text == "returns":
                self._advance()
                returns_out.extend(self._parse_params())
                items.append("returns")  # position marker for reconstruction
            else:
                start = self.pos
                name = self._advance().text
                args = None
                if self._at("("):
                    args = self._parse_call_args()
                items.append(ModifierInvocation(name, args,
                                                self._span_from(start)))
        return items

    def _parse_function(self, contract_name: str | None) -> FunctionDef:
        start = self.pos
        kw = self._advance().text  # function | constructor | fallback | receive
        name = ""
        fn_kind = "function"
        ctor_style = None
        if kw == "constructor":
            fn_kind = "constructor"
            ctor_style = "keyword"
        elif kw in ("fallback", "receive"):
            fn_kind = kw
        else:
            if self._cur().kind is TokenKind.IDENTIFIER and not self._at("("):
                name = self._advance().text
            if name == "" :
                fn_kind = "fallback"  # pre-0.6 `function () payable`
            elif contract_name is not None and name == contract_name:
                fn_kind = "constructor"
                ctor_style = "named"
        params = self._parse_params()
        returns: list[Param] = []
        header_items = self._parse_header_items(returns)
        body = None
        if self._at("{"):
            body = self._parse_block()
        else:
            self._expect(";")
        return FunctionDef(name, params, returns, header_items, body,
                           fn_kind, ctor_style, kw, self._span_from(start))

    def _parse_modifier(self) -> ModifierDef:
        start = self.pos
        self._advance()
        name = self._expect_ident().text
        paren_params = self._at("(")
        params = self._parse_params() if paren_params else []
        returns: list[Param] = []
        header_items = self._parse_header_items(returns)
        body = None
        if self._at("{"):
            body = self._parse_block()
        else:
            self._expect(";")
        return ModifierDef(name, params, header_items, body, paren_params,
                           self._span_from(start))

    def _parse_state_var(self) -> StateVarDef:
        start = self.pos
        type_parts = self._parse_type_tokens()
        attrs: list[str] = []
        while self._cur().text in _STATE_VAR_ATTRS and \
                self._cur().kind is TokenKind.IDENTIFIER:
            attrs.append(self._advance().text)
        name = self._expect_ident().text
        initializer = None
        if self._accept("="):
            initializer = self._parse_expression()
        self._expect(";")
        return StateVarDef(name, join_tokens(type_parts), attrs, initializer,
                           self._span_from(start))

    def _parse_contract(self) -> ContractDef:
        start = self.pos
        is_abstract = self._accept("abstract")
        kind = self._advance().text  # contract | interface | library
        name = self._expect_ident().text
        bases: list[str] = []
        base_args: list[list[Expr] | None] = []
        if self._accept("is"):
            while True:
                base_parts = [self._expect_ident().text]
                while self._accept("."):
                    base_parts.append(self._expect_ident().text)
                bases.append(".".join(base_parts))
                base_args.append(self._parse_call_args() if self._at("(")
                                 else None)
                if not self._accept(","):
                    break
        contract = ContractDef(name, kind, bases, base_args,
                               is_abstract=is_abstract)
        self._expect("{")
        while not self._at("}") and not self._at_end():
            self.deadline.check()
            self._parse_contract_member(contract)
        self._expect("}")
        contract.span = self._span_from(start)
        return contract

    def _capture_skipped(self, start_index: int) -> SkippedDecl:
        span = self._span_from(start_index)
        return SkippedDecl(self.source[span.offset:span.end_offset], span)

    def _parse_contract_member(self, contract: ContractDef) -> None:
        tok = self._cur()
        start = self.pos
        try:
            text = tok.text if tok.kind is TokenKind.IDENTIFIER else ""
            if text in ("function", "constructor") or \
                    (text in ("fallback", "receive") and self._peek().text == "("):
                contract.members.append(self._parse_function(contract.name))
            elif text == "modifier":
                contract.members.append(self._parse_modifier())
            elif text == "event":
                self._skip_to_semicolon()
                contract.members.append(self._capture_skipped(start))
            elif text in ("struct", "enum"):
                self._advance()
                self._expect_ident()
                if self._at("{"):
                    self._skip_balanced()
                contract.members.append(self._capture_skipped(start))
            elif text in ("using", "error", "type"):
                self._skip_to_semicolon()
                contract.members.append(self._capture_skipped(start))
            elif tok.kind is TokenKind.IDENTIFIER:
                contract.members.append(self._parse_state_var())
            else:
                raise ParseError(
                    f"unexpected token {tok.text!r} in contract body", tok)
        except ParseError as err:
            self._diag(err.message, err.token)
            self.pos = max(self.pos, start)
            if self.pos == start:
                self._advance()
            self._skip_to_semicolon()
            contract.members.append(self._capture_skipped(start))

    def _capture_directive(self, start_index: int) -> RawDirective:
        span = self._span_from(start_index)
        return RawDirective(self.source[span.offset:span.end_offset], span)

    def parse_unit(self) -> "SourceUnit":
        from .ast_nodes import SourceUnit  # local import keeps module order simple
        unit = SourceUnit(self.path)
        while not self._at_end():
            self.deadline.check()
            tok = self._cur()
            start = self.pos
            try:
                text = tok.text if tok.kind is TokenKind.IDENTIFIER else ""
                if text == "pragma":
                    self._advance()
                    parts = []
                    while not self._at(";") and not self._at_end():
                        parts.append(self._advance().text)
                    self._accept(";")
                    if parts and parts[0] == "solidity" and unit.pragma is None:
                        unit.pragma = join_tokens(parts[1:])
                    unit.items.append(self._capture_directive(start))
                elif text == "import":
                    self._skip_to_semicolon()
                    unit.items.append(self._capture_directive(start))
                elif text in ("contract", "interface", "library") or \
                        (text == "abstract" and self._peek().text == "contract"):
                    contract = self._parse_contract()
                    if any(c.name == contract.name for c in unit.contracts):
                        self._diag(f"duplicate contract name {contract.name!r}",
                                   tok, "warning")
                    unit.items.append(contract)
                elif text == "function":
                    # free functions carry no state; not modeled
                    self._diag("file-level function ignored", tok, "warning")
                    self._advance()
                    while not self._at_end() and not self._at("{") and not self._at(";"):
                        self._advance()
                    if self._at("{"):
                        self._skip_balanced()
                    else:
                        self._accept(";")
                    unit.items.append(self._capture_directive(start))
                elif text in ("struct", "enum"):
                    self._advance()
                    if self._cur().kind is TokenKind.IDENTIFIER:
                        self._advance()
                    if self._at("{"):
                        self._skip_balanced()
                    unit.items.append(self._capture_directive(start))
                elif text in ("using", "error", "type") or tok.kind is TokenKind.IDENTIFIER:
                    self._diag(f"unsupported file-level item {tok.text!r} skipped",
                               tok, "warning")
                    self._skip_to_semicolon()
                    unit.items.append(self._capture_directive(start))
                else:
                    self._diag(f"unexpected file-level token {tok.text!r}",
                               tok, "warning")
                    self._advance()
                    unit.items.append(self._capture_directive(start))
            except ParseError as err:
                self._diag(err.message, err.token)
                self.pos = max(self.pos, start)
                if self.pos == start:
                    self._advance()
                self._skip_to_semicolon()
                unit.items.append(self._capture_directive(start))
        for contract in unit.contracts:
            ctors = [f for f in contract.functions if f.is_constructor]
            if len(ctors) > 1:
                self._diag(f"contract {contract.name!r} declares "
                           f"{len(ctors)} constructors", self.tokens[0], "warning")
        unit.diagnostics.extend(self.diagnostics)
        return unit


def parse_source(data, path: str = "<memory>", *,
                 max_source_bytes: int = DEFAULT_MAX_SOURCE_BYTES,
                 deadline: Deadline | None = None):
    """Parse one Solidity source file into a SourceUnit.

    Accepts str or bytes. Raises UnreadableInput for undecodable or
    oversized input, FatalSyntax for brace imbalance, AnalysisTimeout when
    the deadline expires. All other trouble lands in unit.diagnostics.
    Call forms are normalized before returning, so every Call node carries
    its call_kind.
    """
    from .normalize import normalize_call_forms

    _ensure_recursion_headroom()
    deadline = deadline or Deadline.unlimited()
    if isinstance(data, bytes):
        if len(data) > max_source_bytes:
            raise UnreadableInput(
                f"{path}: input exceeds {max_source_bytes} bytes")
        try:
            source = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise UnreadableInput(f"{path}: not valid UTF-8 ({exc})") from None
    else:
        source = data
        if len(source.encode("utf-8", errors="replace")) > max_source_bytes:
            raise UnreadableInput(
                f"{path}: input exceeds {max_source_bytes} bytes")
    tokens, lex_issues = tokenize(source, deadline)
    check_brace_balance(tokens)
    parser = Parser(tokens, source, path, deadline)
    for issue in lex_issues:
        parser.diagnostics.append(
            Diagnostic(issue.message, issue.line, issue.column, "warning"))
    unit = parser.parse_unit()
    normalize_call_forms(unit)
    return unit
