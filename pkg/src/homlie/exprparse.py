"""Tokenizer and recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-')* atom ('^' int)?
    atom   := int | int '/' int | ident | '(' expr ')'

A leading minus binds looser than ``^``: ``-a^2`` is ``-(a^2)``.
Multiplication must be explicit; ``2a22`` is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .errors import ExprSyntaxError, UnknownParameter
from .symcore import MultiPoly, Registry

_SINGLE = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
    "/": "slash",
}


@dataclass(frozen=True)
class ExprToken:
    kind: str  # integer | identifier | plus | minus | star | caret | lparen | rparen | slash
    lexeme: str
    position: int  # byte offset into the UTF-8 source


def tokenize(src: str) -> List[ExprToken]:
    tokens: List[ExprToken] = []
    i, n = 0, len(src)
    byte = 0  # running UTF-8 offset of src[i]
    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            i += 1
            byte += 1
            continue
        start, start_byte = i, byte
        if ch in _SINGLE:
            i += 1
            kind = _SINGLE[ch]
        elif "0" <= ch <= "9":
            while i < n and "0" <= src[i] <= "9":
                i += 1
            kind = "integer"
        elif ch.isascii() and ch.isalpha():
            while i < n and src[i].isascii() and (src[i].isalnum() or src[i] == "_"):
                i += 1
            kind = "identifier"
        else:
            raise ExprSyntaxError(f"illegal character {ch!r}", byte)
        lexeme = src[start:i]
        byte += len(lexeme)  # all accepted lexemes are ASCII
        tokens.append(ExprToken(kind, lexeme, start_byte))
    return tokens


class _Parser:
    def __init__(self, src: str, registry: Registry | None):
        self.tokens = tokenize(src)
        self.pos = 0
        self.registry = registry
        self.end = len(src.encode("utf-8"))

    def peek(self) -> ExprToken | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def where(self) -> int:
        tok = self.peek()
        return tok.position if tok is not None else self.end

    def expect(self, kind: str, what: str) -> ExprToken:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.lexeme)
            raise ExprSyntaxError(f"expected {what}, found {found}", self.where())
        self.pos += 1
        return tok

    def accept(self, kind: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.pos += 1
            return True
        return False

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise ExprSyntaxError("empty expression", 0)
        value = self.expr()
        if self.peek() is not None:
            tok = self.peek()
            hint = " (multiplication must be written with '*')" if tok.kind in ("identifier", "integer", "lparen") else ""
            raise ExprSyntaxError(f"unexpected {tok.lexeme!r}{hint}", tok.position)
        return value

    def expr(self) -> MultiPoly:
        value = self.term()
        while True:
            if self.accept("plus"):
                value = value + self.term()
            elif self.accept("minus"):
                value = value - self.term()
            else:
                return value

    def term(self) -> MultiPoly:
        value = self.factor()
        while self.accept("star"):
            value = value * self.factor()
        return value

    def factor(self) -> MultiPoly:
        negate = False
        while self.accept("minus"):
            negate = not negate
        value = self.atom()
        if self.accept("caret"):
            tok = self.peek()
            if tok is not None and tok.kind == "minus":
                raise ExprSyntaxError("negative exponent", tok.position)
            exp = self.expect("integer", "integer exponent")
            value = value ** int(exp.lexeme)
        return -value if negate else value

    def atom(self) -> MultiPoly:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of input", self.end)
        if tok.kind == "integer":
            self.pos += 1
            num = int(tok.lexeme)
            if self.accept("slash"):
                den_tok = self.expect("integer", "integer denominator")
                den = int(den_tok.lexeme)
                if den == 0:
                    raise ExprSyntaxError("zero denominator", den_tok.position)
                return MultiPoly.constant(Fraction(num, den), self.registry)
            return MultiPoly.constant(num, self.registry)
        if tok.kind == "identifier":
            self.pos += 1
            if self.registry is None or tok.lexeme not in self.registry:
                raise UnknownParameter(tok.lexeme, tok.position)
            return self.registry.var(tok.lexeme)
        if tok.kind == "lparen":
            self.pos += 1
            value = self.expr()
            self.expect("rparen", "')'")
            return value
        raise ExprSyntaxError(f"unexpected {tok.lexeme!r}", tok.position)


def parse_poly(src: str, registry: Registry | None = None) -> MultiPoly:
    """Parse ``src`` into a canonical polynomial over ``registry``."""
    return _Parser(src, registry).parse()


def parse_equation(src: str, registry: Registry | None = None) -> MultiPoly:
    """Parse ``lhs = rhs`` (or a bare expression) into ``lhs - rhs``."""
    if src.count("=") > 1:
        raise ExprSyntaxError("more than one '='", src.rindex("="))
    if "=" in src:
        lhs, rhs = src.split("=")
        return parse_poly(lhs, registry) - parse_poly(rhs, registry)
    return parse_poly(src, registry)
