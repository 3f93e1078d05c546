"""Tokenizer for the supported Solidity subset.

Covers the 0.4.x through 0.8.x surface the analyzer understands: nested
comments are not a thing in Solidity, strings never span lines, and
numbers keep their exact source text (hex literals included) so that
addresses survive verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

from ..errors import FatalSyntax
from ..timing import Deadline

# Multi-character operators, longest first so maximal munch falls out of
# the scan order.
_OPERATORS = [
    ">>=", "<<=", "**=",
    "==", "!=", "<=", ">=", "&&", "||", "->", "=>",
    "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=",
    "++", "--", "**", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "?", ":",
]

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | set("0123456789")

_DEADLINE_STRIDE = 8192


class TokenKind(Enum):
    IDENTIFIER = auto()
    NUMBER = auto()
    STRING = auto()
    PUNCT = auto()
    EOF = auto()


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    offset: int

    @property
    def end_offset(self) -> int:
        return self.offset + len(self.text)


@dataclass(frozen=True)
class LexIssue:
    message: str
    line: int
    column: int
    offset: int


class Lexer:
    def __init__(self, source: str, deadline: Deadline | None = None):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1
        self.deadline = deadline or Deadline.unlimited()
        self.issues: list[LexIssue] = []
        self._next_deadline_check = _DEADLINE_STRIDE

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.source[i] if i < len(self.source) else ""

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos >= len(self.source):
                return
            if self.source[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _issue(self, message: str) -> None:
        self.issues.append(LexIssue(message, self.line, self.column, self.pos))

    def _skip_trivia(self) -> None:
        while self.pos < len(self.source):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.source) and self._peek() != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                self._advance(2)
                closed = False
                while self.pos < len(self.source):
                    if self._peek() == "*" and self._peek(1) == "/":
                        self._advance(2)
                        closed = True
                        break
                    self._advance()
                if not closed:
                    self._issue("unterminated block comment")
            else:
                return

    def _read_string(self) -> Token:
        quote = self._peek()
        start = (self.line, self.column, self.pos)
        self._advance()
        while self.pos < len(self.source):
            ch = self._peek()
            if ch == "\\":
                self._advance(2)
            elif ch == quote:
                self._advance()
                break
            elif ch == "\n":
                self._issue("unterminated string literal")
                break
            else:
                self._advance()
        else:
            self._issue("unterminated string literal")
        text = self.source[start[2]:self.pos]
        return Token(TokenKind.STRING, text, start[0], start[1], start[2])

    def _read_number(self) -> Token:
        start = (self.line, self.column, self.pos)
        if self._peek() == "0" and self._peek(1) in "xX":
            self._advance(2)
            while self._peek() and (self._peek() in "0123456789abcdefABCDEF_"):
                self._advance()
        else:
            while self._peek() and self._peek() in "0123456789._eE":
                # '.' only continues a number when a digit follows; '1.call'
                # must lex as NUMBER '.' IDENT.
                if self._peek() == ".":
                    if self._peek(1) not in "0123456789":
                        break
                if self._peek() in "eE" and self._peek(1) not in "0123456789+-":
                    break
                if self._peek() in "eE" and self._peek(1) in "+-":
                    self._advance()
                self._advance()
        text = self.source[start[2]:self.pos]
        return Token(TokenKind.NUMBER, text, start[0], start[1], start[2])

    def _read_identifier(self) -> Token:
        start = (self.line, self.column, self.pos)
        while self._peek() and self._peek() in _IDENT_CONT:
            self._advance()
        text = self.source[start[2]:self.pos]
        return Token(TokenKind.IDENTIFIER, text, start[0], start[1], start[2])

    def next_token(self) -> Token:
        if self.pos >= self._next_deadline_check:
            self.deadline.check()
            self._next_deadline_check = self.pos + _DEADLINE_STRIDE
        self._skip_trivia()
        if self.pos >= len(self.source):
            return Token(TokenKind.EOF, "", self.line, self.column, self.pos)
        ch = self._peek()
        if ch in "\"'":
            return self._read_string()
        if ch in "0123456789":  # not isdigit(): U+00B9 etc must not loop
            return self._read_number()
        if ch in _IDENT_START:
            tok = self._read_identifier()
            # hex"deadbeef" / unicode"..." literal forms
            if tok.text in ("hex", "unicode") and self._peek() in "\"'":
                s = self._read_string()
                return Token(TokenKind.STRING, tok.text + s.text,
                             tok.line, tok.column, tok.offset)
            return tok
        for op in _OPERATORS:
            if self.source.startswith(op, self.pos):
                tok = Token(TokenKind.PUNCT, op, self.line, self.column, self.pos)
                self._advance(len(op))
                return tok
        self._issue(f"unexpected character {ch!r}")
        tok = Token(TokenKind.PUNCT, ch, self.line, self.column, self.pos)
        self._advance()
        return tok


def tokenize(source: str, deadline: Deadline | None = None) -> tuple[list[Token], list[LexIssue]]:
    """Tokenize the whole source, EOF token included."""
    lexer = Lexer(source, deadline)
    tokens: list[Token] = []
    while True:
        tok = lexer.next_token()
        tokens.append(tok)
        if tok.kind is TokenKind.EOF:
            return tokens, lexer.issues


def check_brace_balance(tokens: list[Token]) -> None:
    """Raise FatalSyntax when braces cannot pair up.

    A source whose braces do not balance has no recoverable contract
    structure; statement-level recovery relies on matching closers.
    """
    depth = 0
    for tok in tokens:
        if tok.kind is not TokenKind.PUNCT:
            continue
        if tok.text == "{":
            depth += 1
        elif tok.text == "}":
            depth -= 1
            if depth < 0:
                raise FatalSyntax(
                    f"unbalanced '}}' at line {tok.line}, column {tok.column}")
    if depth != 0:
        raise FatalSyntax(f"{depth} unclosed '{{' at end of input")
