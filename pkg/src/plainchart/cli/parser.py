"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := sign? term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' uint)?
    base    := identifier | rational | '(' expr ')'
    rational := int ('/' uint)?

There is no implicit multiplication: ``2x`` is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..polycore import PolyRing, Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int, expected: str | None = None):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column, self.expected = line, col, expected
        detail = f"{message} at line {line}, column {col}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


@dataclass
class Token:
    kind: str  # "int", "ident", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j].isalpha() or text[j] == "_"):
                raise ParseError("implicit multiplication is not allowed", text, j, "operator")
            tokens.append(Token("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append(Token("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i)
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, expected: str | None = None):
        raise ParseError(message, self.text, self.tok.pos, expected)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def uint(self) -> int:
        if self.tok.kind != "int":
            self.fail("malformed exponent" if self.tokens[self.i - 1].text == "^" else "bad number",
                      "unsigned integer")
        value = int(self.tok.text)
        self.i += 1
        return value

    def expr(self) -> Polynomial:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.accept("^"):
            return base ** self.uint()
        return base

    def base(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "ident":
            if tok.text not in self.ring:
                self.fail(f"unknown variable {tok.text!r}", f"one of {', '.join(self.ring.variables)}")
            self.i += 1
            return self.ring.var(tok.text)
        if tok.kind == "int":
            self.i += 1
            value = Fraction(int(tok.text))
            if self.accept("/"):
                den = self.uint()
                if den == 0:
                    raise ParseError("zero denominator", self.text, self.tokens[self.i - 1].pos)
                value /= den
            return self.ring.const(value)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.fail("unbalanced parenthesis", "')'")
            return inner
        self.fail("unexpected end of input" if tok.kind == "end" else f"unexpected {tok.text!r}",
                  "identifier, number or '('")


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    p = _Parser(text, ring)
    result = p.expr()
    if p.tok.kind != "end":
        p.fail(f"unexpected {p.tok.text!r}", "'+', '-', '*' or end of input")
    return result


def parse_rational(text) -> Fraction:
    """Exact number from a file field: ``"3/2"``, ``"-4"`` or an int; floats are refused."""
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"numbers must be exact strings, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    try:
        num, _, den = s.partition("/")
        if "." in s or "e" in s.lower():
            raise ValueError
        return Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact rational: {text!r}") from None
