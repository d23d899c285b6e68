"""Recursive-descent parser for meromorphic-function expressions.

Grammar (whitespace-insensitive, no implicit multiplication):

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' intlit)?
    atom    := 'z' | 'i' | number | 'exp' '(' expr ')' | '(' expr ')'
    number  := digits ('.' digits)? (('e'|'E') sign? digits)?
    intlit  := sign? digits

`^` binds tighter than unary minus, so -z^2 is -(z^2).  Exponents are plain
integer literals; chained `^` must be parenthesized at the base.  Errors
report a 1-based byte offset and the set of token kinds that were expected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .expressions import (
    MAX_EXPONENT,
    Add,
    Const,
    Div,
    Exp,
    Expr,
    IntPow,
    Mul,
    Neg,
    Sub,
    Var,
)

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")

_ATOM_EXPECTED = ("'('", "'exp'", "'i'", "'z'", "number")


class ParseError(ValueError):
    """Syntax error with a 1-based byte offset and the expected token kinds."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


@dataclass(frozen=True)
class _Token:
    kind: str  # one of: number, z, i, exp, + - * / ^ ( ), end
    text: str
    offset: int  # 1-based byte position of the first character


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, pos + 1))
            pos += 1
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(text, pos)
            tokens.append(_Token("number", m.group(0), pos + 1))
            pos = m.end()
            continue
        if ch.isalpha():
            end = pos
            while end < n and text[end].isalpha():
                end += 1
            word = text[pos:end]
            if word in ("z", "i", "exp"):
                tokens.append(_Token(word, word, pos + 1))
                pos = end
                continue
            raise ParseError(f"unknown name '{word}'", pos + 1, _ATOM_EXPECTED)
        raise ParseError(f"unexpected character '{ch}'", pos + 1)
    tokens.append(_Token("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected {describe(tok)}", tok.offset, (f"'{kind}'",)
            )
        return self.advance()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs_start = self.peek().offset
            rhs = self.factor()
            if op == "/":
                if isinstance(rhs, Const) and rhs.value == 0:
                    raise ParseError("division by the constant zero", rhs_start)
                node = Div(node, rhs)
            else:
                node = Mul(node, rhs)
        return node

    def factor(self) -> Expr:
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind != "^":
            return base
        self.advance()
        return IntPow(base, self.intlit())

    def intlit(self) -> int:
        sign = 1
        tok = self.peek()
        if tok.kind in ("+", "-"):
            self.advance()
            sign = -1 if tok.kind == "-" else 1
            tok = self.peek()
        if tok.kind != "number" or not tok.text.isdigit():
            raise ParseError(
                f"unexpected {describe(tok)}", tok.offset, ("integer exponent",)
            )
        self.advance()
        value = sign * int(tok.text)
        if abs(value) > MAX_EXPONENT:
            raise ParseError(
                f"integer exponent overflow (|k| > {MAX_EXPONENT})", tok.offset
            )
        return value

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "z":
            self.advance()
            return Var()
        if tok.kind == "i":
            self.advance()
            return Const.imaginary_unit()
        if tok.kind == "number":
            self.advance()
            return self.number_const(tok)
        if tok.kind == "exp":
            self.advance()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return Exp(inner)
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {describe(tok)}", tok.offset, _ATOM_EXPECTED)

    @staticmethod
    def number_const(tok: _Token) -> Const:
        try:
            return Const.from_decimal(tok.text)
        except OverflowError:
            raise ParseError(
                f"number literal '{tok.text}' overflows", tok.offset
            ) from None


def describe(tok: _Token) -> str:
    if tok.kind == "end":
        return "end of input"
    return f"token '{tok.text}'"


def parse(text: str) -> Expr:
    """Parse an expression, or raise :class:`ParseError` with offset details."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(
            f"unexpected {describe(trailing)} after expression", trailing.offset
        )
    return node
