"""Recursive-descent parser for rational-function expressions and surd literals.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | base ('^' exponent)?
    base   := integer | variable | '(' expr ')'
    exponent := integer | '-' integer | '(' ('-')? integer ')'

A rational literal p/q is the division of two integers.  '^' binds tighter
than unary minus, implicit multiplication and '**' are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import flint

from .algebra import BiPoly, BiRatFunc, RatFunc, SurdValue, UniPoly
from .algebra.ratfunc import _as_bipoly
from .algebra.surd import NEG_INF, POS_INF, Infinity

IDENTIFIERS = frozenset({"x", "z", "y", "u", "v", "sqrt"})
OPERATORS = "+-*/^"


@dataclass(frozen=True)
class ExprToken:
    kind: str  # "int", "ident", "op", "lparen", "rparen", "end"
    text: str
    position: int


class ParseError(ValueError):
    """Malformed input; ``position`` is the byte offset of the offending token."""

    def __init__(self, position: int, expected: str, found: str, text: str | None = None):
        self.position = position
        self.expected = expected
        self.found = found
        self.text = text
        super().__init__(self._message())

    def _message(self) -> str:
        found = repr(self.found) if self.found else "end of input"
        msg = f"at offset {self.position}: expected {self.expected}, found {found}"
        return msg

    def annotate(self) -> str:
        """Message followed by the input with a caret under the offending column."""
        if self.text is None:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.position}^"


def tokenize(text: str) -> list[ExprToken]:
    tokens: list[ExprToken] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise ParseError(j, "operator or end of input (floating literals are not supported)", ".", text)
            tokens.append(ExprToken("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(ExprToken("ident", word, i))
            i = j
            continue
        if ch in OPERATORS:
            if ch == "*" and i + 1 < n and text[i + 1] == "*":
                raise ParseError(i + 1, "operand ('**' is not an operator; use '^')", "*", text)
            tokens.append(ExprToken("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(ExprToken("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(ExprToken("rparen", ch, i))
            i += 1
            continue
        raise ParseError(i, "expression character", ch, text)
    tokens.append(ExprToken("end", "", n))
    return tokens


class _Parser:
    """Shared cursor logic over a token stream."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> ExprToken:
        return self.tokens[self.i]

    def advance(self) -> ExprToken:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, expected: str, tok: ExprToken | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(tok.position, expected, tok.text, self.text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> ExprToken:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            raise self.error(what or repr(text or kind))
        return self.advance()

    def is_op(self, chars: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in chars

    def finish(self):
        if self.tok.kind != "end":
            if self.tok.kind in ("int", "ident", "lparen"):
                raise self.error("operator (implicit multiplication is not allowed)")
            raise self.error("operator or end of input")


class _ExprParser(_Parser):
    """Evaluates directly into BiRatFunc values over the allowed variable pair."""

    def __init__(self, text: str, vars: tuple[str, str], allowed: frozenset[str]):
        super().__init__(text)
        self.vars = vars
        self.allowed = allowed

    def const(self, c) -> BiRatFunc:
        return BiRatFunc._raw(BiPoly.constant(c, self.vars), BiPoly.constant(1, self.vars))

    def parse(self) -> BiRatFunc:
        if self.tok.kind == "end":
            raise self.error("expression")
        value = self.expr()
        self.finish()
        return value

    def expr(self) -> BiRatFunc:
        value = self.term()
        while self.is_op("+-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> BiRatFunc:
        value = self.factor()
        while self.is_op("*/"):
            op_tok = self.advance()
            rhs = self.factor()
            if op_tok.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError(op_tok.position, "nonzero divisor", op_tok.text, self.text)
                value = value / rhs
        return value

    def factor(self) -> BiRatFunc:
        if self.is_op("-+"):
            op = self.advance().text
            inner = self.factor()
            return -inner if op == "-" else inner
        value = self.base()
        if self.is_op("^"):
            caret = self.advance()
            e = self.exponent()
            if e < 0 and value.is_zero():
                raise ParseError(caret.position, "nonzero base for a negative power", caret.text, self.text)
            value = value ** e
            if self.is_op("^"):
                raise self.error("operator other than a second '^' (write parentheses)")
        return value

    def exponent(self) -> int:
        if self.tok.kind == "lparen":
            self.advance()
            neg = False
            if self.is_op("-"):
                self.advance()
                neg = True
            t = self.expect("int", what="integer exponent")
            self.expect("rparen", what="')'")
            return -int(t.text) if neg else int(t.text)
        neg = False
        if self.is_op("-"):
            self.advance()
            neg = True
        t = self.expect("int", what="integer exponent")
        return -int(t.text) if neg else int(t.text)

    def base(self) -> BiRatFunc:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return self.const(int(t.text))
        if t.kind == "ident":
            if t.text not in IDENTIFIERS or t.text == "sqrt":
                raise self.error(f"variable in {sorted(self.allowed)}")
            if t.text not in self.allowed:
                raise self.error(f"variable in {sorted(self.allowed)}")
            self.advance()
            g0, g1 = BiPoly.gens(self.vars)
            g = g0 if t.text == self.vars[0] else g1
            return BiRatFunc._raw(g, BiPoly.constant(1, self.vars))
        if t.kind == "lparen":
            self.advance()
            value = self.expr()
            self.expect("rparen", what="')'")
            return value
        raise self.error("number, variable or '('")


_PAIR_ORDER = ("x", "z", "y", "u", "v")


def _normalize_vars(allowed: Sequence[str] | str) -> tuple[tuple[str, ...], frozenset[str]]:
    if isinstance(allowed, str):
        allowed = (allowed,)
    if isinstance(allowed, (set, frozenset)):
        ordered = tuple(sorted(allowed, key=lambda v: _PAIR_ORDER.index(v) if v in _PAIR_ORDER else 99))
    else:
        ordered = tuple(allowed)
    bad = [v for v in ordered if v not in IDENTIFIERS or v == "sqrt"]
    if bad or not 1 <= len(ordered) <= 2:
        raise ValueError(f"allowed variables must be one or two of x, z, y, u, v; got {ordered}")
    return ordered, frozenset(ordered)


def parse_ratfunc(text: str, allowed_vars: Sequence[str] | str = ("x",)) -> RatFunc | BiRatFunc:
    """Parse an expression; one allowed variable gives a RatFunc, two a BiRatFunc."""
    ordered, allowed = _normalize_vars(allowed_vars)
    pair = ordered if len(ordered) == 2 else (ordered[0], "_aux" if ordered[0] != "_aux" else "_aux2")
    value = _ExprParser(text, pair, allowed).parse()
    if len(ordered) == 2:
        return value
    num = value.num.to_unipoly(ordered[0])
    den = value.den.to_unipoly(ordered[0])
    return RatFunc(num, den, var=ordered[0])


def parse_poly(text: str, allowed_vars: Sequence[str] | str = ("x",)) -> UniPoly | BiPoly:
    """Parse an expression that must reduce to a polynomial."""
    value = parse_ratfunc(text, allowed_vars)
    if isinstance(value, RatFunc):
        if value.den.degree() != 0:
            raise ParseError(0, "polynomial expression", text, text)
        return value.num
    if not value.den.is_constant():
        raise ParseError(0, "polynomial expression", text, text)
    return value.num


def unparse(value) -> str:
    """Textual form accepted by parse_ratfunc."""
    if isinstance(value, (UniPoly, BiPoly)):
        return value.to_str()
    if isinstance(value, (RatFunc, BiRatFunc)):
        return f"({value.num.to_str()})/({value.den.to_str()})"
    raise TypeError(type(value).__name__)


# -- surds -----------------------------------------------------------------

class _SurdParser(_Parser):
    """Arithmetic over Q(sqrt(d)) with integer literals and sqrt(rational)."""

    def parse(self) -> SurdValue:
        if self.tok.kind == "end":
            raise self.error("surd literal")
        value = self.expr()
        self.finish()
        return value

    def expr(self) -> SurdValue:
        value = self.term()
        while self.is_op("+-"):
            op = self.advance()
            rhs = self.term()
            value = self.combine(op, value, rhs, "+" if op.text == "+" else "-")
        return value

    def term(self) -> SurdValue:
        value = self.factor()
        while self.is_op("*/"):
            op = self.advance()
            rhs = self.factor()
            if op.text == "/" and rhs.sign() == 0:
                raise ParseError(op.position, "nonzero divisor", op.text, self.text)
            value = self.combine(op, value, rhs, op.text)
        return value

    def combine(self, op: ExprToken, a: SurdValue, b: SurdValue, kind: str) -> SurdValue:
        try:
            if kind == "+":
                return a + b
            if kind == "-":
                return a - b
            if kind == "*":
                return a * b
            return a / b
        except ValueError:
            raise ParseError(op.position, "a single square root", op.text, self.text) from None

    def factor(self) -> SurdValue:
        if self.is_op("-+"):
            op = self.advance().text
            inner = self.factor()
            return -inner if op == "-" else inner
        t = self.tok
        if t.kind == "int":
            self.advance()
            return SurdValue(flint.fmpq(int(t.text)))
        if t.kind == "ident" and t.text == "sqrt":
            self.advance()
            self.expect("lparen", what="'('")
            start = self.tok
            inner = self.expr()
            self.expect("rparen", what="')'")
            if not inner.is_rational():
                raise ParseError(start.position, "rational radicand", start.text, self.text)
            if inner.a < 0:
                raise ParseError(start.position, "nonnegative radicand", start.text, self.text)
            return SurdValue.sqrt_of(inner.a)
        if t.kind == "lparen":
            self.advance()
            value = self.expr()
            self.expect("rparen", what="')'")
            return value
        raise self.error("number, 'sqrt' or '('")


def parse_surd(text: str) -> SurdValue:
    """Parse a literal such as '1/4', 'sqrt(2)-1' or '2*sqrt(6)/3'."""
    return _SurdParser(text).parse()


def parse_endpoint(text: str) -> SurdValue | Infinity:
    """Surd literal, or 'inf' / '+inf' / '-inf' for an unbounded end."""
    s = text.strip().lower()
    if s in ("inf", "+inf", "oo", "+oo", "infinity"):
        return POS_INF
    if s in ("-inf", "-oo", "-infinity"):
        return NEG_INF
    return parse_surd(text)


def as_bipoly(p, vars) -> BiPoly:
    return _as_bipoly(p, tuple(vars))
