"""
Expression frontend: tokenizer, recursive-descent parser and canonical printer.

Grammar (whitespace insignificant):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' ['-'] integer)?
    base   := integer | 'x' | 't' | '(' expr ')' | '-' factor

Operator text additionally accepts ``Dt`` as a base; it is read as a
commuting symbol, so operators must be written normal-ordered with
coefficients to the left of the powers of Dt.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import singledispatch
from typing import Dict, List, Optional, Sequence, Tuple

from errors import (
    DivisionByZeroLiteral,
    ExpressionSyntaxError,
    ZeroDenominator,
)
from ore import OreOperator
from rational import RatFuncT, RatFuncXT, to_fraction

logger = logging.getLogger(__name__)


class NodeKind(str, Enum):
    SUM = "sum"
    PRODUCT = "product"
    QUOTIENT = "quotient"
    POWER = "power"
    NEGATION = "negation"
    VAR_X = "x"
    VAR_T = "t"
    DT = "Dt"
    INTEGER = "integer"


@dataclass(frozen=True)
class ExprAst:
    """Immutable syntax tree node.

    ``value`` holds the literal of an integer node and the exponent of a power
    node.  ``offset`` is the byte offset of the node's first token.
    """

    kind: NodeKind
    children: Tuple["ExprAst", ...] = ()
    value: int = 0
    offset: int = field(default=0, compare=False)


def integer(n: int) -> ExprAst:
    return ExprAst(NodeKind.INTEGER, value=n)


def var_x() -> ExprAst:
    return ExprAst(NodeKind.VAR_X)


def var_t() -> ExprAst:
    return ExprAst(NodeKind.VAR_T)


# Tokenizer

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<dt>Dt)|(?P<var>[xt])|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[_Token]:
    """
    Split text into tokens with byte offsets.

    Args:
        text: Expression text

    Returns:
        Tokens followed by an end marker

    Raises:
        ExpressionSyntaxError: At the first character that starts no token
    """
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(
                f"unexpected character {text[start]!r}", _byte_offset(text, start), text
            )
        start = m.start(m.lastgroup)
        tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text.encode("utf-8"))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


# Parser

class _Parser:
    def __init__(self, text: str, allow_dt: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.allow_dt = allow_dt

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[_Token] = None) -> ExpressionSyntaxError:
        tok = tok or self.current
        return ExpressionSyntaxError(message, tok.offset, self.text)

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> ExprAst:
        if self.current.kind == "eof":
            raise self.error("empty expression")
        node = self.expr()
        if self.current.kind != "eof":
            raise self.error(f"unexpected token {self.current.text!r}")
        return node

    def expr(self) -> ExprAst:
        first = self.term()
        children = [first]
        while self.at_op("+", "-"):
            op = self.advance()
            rhs = self.term()
            if op.text == "-":
                rhs = ExprAst(NodeKind.NEGATION, (rhs,), offset=op.offset)
            children.append(rhs)
        if len(children) == 1:
            return first
        return ExprAst(NodeKind.SUM, tuple(children), offset=first.offset)

    def term(self) -> ExprAst:
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.advance()
            rhs = self.factor()
            if op.text == "/":
                if rhs.kind is NodeKind.INTEGER and rhs.value == 0:
                    raise DivisionByZeroLiteral(rhs.offset)
                node = ExprAst(NodeKind.QUOTIENT, (node, rhs), offset=node.offset)
            else:
                node = ExprAst(NodeKind.PRODUCT, (node, rhs), offset=node.offset)
        return node

    def factor(self) -> ExprAst:
        base = self.base()
        if not self.at_op("^"):
            return base
        self.advance()
        negative = False
        if self.at_op("-"):
            self.advance()
            negative = True
        tok = self.current
        if tok.kind != "int":
            raise self.error("expected an integer exponent")
        self.advance()
        exponent = -int(tok.text) if negative else int(tok.text)
        if exponent < 0 and base.kind is NodeKind.INTEGER and base.value == 0:
            raise DivisionByZeroLiteral(base.offset)
        return ExprAst(NodeKind.POWER, (base,), value=exponent, offset=base.offset)

    def base(self) -> ExprAst:
        tok = self.current
        if tok.kind == "int":
            self.advance()
            return ExprAst(NodeKind.INTEGER, value=int(tok.text), offset=tok.offset)
        if tok.kind == "var":
            self.advance()
            kind = NodeKind.VAR_X if tok.text == "x" else NodeKind.VAR_T
            return ExprAst(kind, offset=tok.offset)
        if tok.kind == "dt":
            if not self.allow_dt:
                raise self.error("Dt is only allowed in operator text")
            self.advance()
            return ExprAst(NodeKind.DT, offset=tok.offset)
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            if not self.at_op(")"):
                raise self.error("expected ')'")
            self.advance()
            return inner
        if self.at_op("-"):
            self.advance()
            inner = self.factor()
            return ExprAst(NodeKind.NEGATION, (inner,), offset=tok.offset)
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {tok.text!r}")


def parse_expression(text: str) -> ExprAst:
    """Parse rational-function text into a syntax tree."""
    return _Parser(text, allow_dt=False).parse()


# Evaluation

def to_canonical(ast: ExprAst) -> RatFuncXT:
    """Evaluate a syntax tree to its reduced rational function."""
    kind = ast.kind
    if kind is NodeKind.INTEGER:
        return RatFuncXT.const(ast.value)
    if kind is NodeKind.VAR_X:
        return RatFuncXT.x()
    if kind is NodeKind.VAR_T:
        return RatFuncXT.t()
    if kind is NodeKind.NEGATION:
        return -to_canonical(ast.children[0])
    if kind is NodeKind.SUM:
        acc = RatFuncXT.zero()
        for child in ast.children:
            acc = acc + to_canonical(child)
        return acc
    if kind is NodeKind.PRODUCT:
        return to_canonical(ast.children[0]) * to_canonical(ast.children[1])
    if kind is NodeKind.QUOTIENT:
        num = to_canonical(ast.children[0])
        den = to_canonical(ast.children[1])
        if den.is_zero:
            raise ZeroDenominator(
                f"denominator simplifies to zero at byte offset {ast.children[1].offset}"
            )
        return num / den
    if kind is NodeKind.POWER:
        base = to_canonical(ast.children[0])
        if ast.value < 0 and base.is_zero:
            raise ZeroDenominator(f"zero raised to a negative power at byte offset {ast.offset}")
        return base ** ast.value
    raise ExpressionSyntaxError(f"{kind.value} is not a rational function", ast.offset)


def parse_rational(text: str) -> RatFuncXT:
    """Text to an element of Q(t)(x)."""
    return to_canonical(parse_expression(text))


def _first(ast: ExprAst, kind: NodeKind) -> Optional[ExprAst]:
    if ast.kind is kind:
        return ast
    for child in ast.children:
        found = _first(child, kind)
        if found is not None:
            return found
    return None


def parse_rational_t(text: str) -> RatFuncT:
    """Text to an element of Q(t); any occurrence of x is rejected."""
    ast = parse_expression(text)
    bad = _first(ast, NodeKind.VAR_X)
    if bad is not None:
        raise ExpressionSyntaxError("x is not allowed here", bad.offset, text)
    return to_canonical(ast).to_t()


def parse_rational_q(text: str) -> Fraction:
    """Text to a rational constant; x and t are rejected."""
    ast = parse_expression(text)
    for kind in (NodeKind.VAR_X, NodeKind.VAR_T):
        bad = _first(ast, kind)
        if bad is not None:
            raise ExpressionSyntaxError(f"{kind.value} is not allowed here", bad.offset, text)
    return to_canonical(ast).to_t().constant_value()


class _DtPoly:
    """A polynomial in a commuting symbol Dt with Q(t) coefficients."""

    def __init__(self, coeffs: Optional[Dict[int, RatFuncT]] = None):
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c}

    @classmethod
    def scalar(cls, c: RatFuncT) -> "_DtPoly":
        return cls({0: c})

    def is_scalar(self) -> bool:
        return all(k == 0 for k in self.coeffs)

    def scalar_value(self) -> RatFuncT:
        return self.coeffs.get(0, RatFuncT.zero())

    def __add__(self, other: "_DtPoly") -> "_DtPoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, RatFuncT.zero()) + c
        return _DtPoly(out)

    def __neg__(self) -> "_DtPoly":
        return _DtPoly({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other: "_DtPoly") -> "_DtPoly":
        out: Dict[int, RatFuncT] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, RatFuncT.zero()) + a * b
        return _DtPoly(out)

    def scale(self, c: RatFuncT) -> "_DtPoly":
        return _DtPoly({k: v * c for k, v in self.coeffs.items()})


def _to_dt_poly(ast: ExprAst, text: str) -> _DtPoly:
    kind = ast.kind
    if kind is NodeKind.INTEGER:
        return _DtPoly.scalar(RatFuncT.const(ast.value))
    if kind is NodeKind.VAR_T:
        return _DtPoly.scalar(RatFuncT.t())
    if kind is NodeKind.VAR_X:
        raise ExpressionSyntaxError("x is not allowed in operator coefficients", ast.offset, text)
    if kind is NodeKind.DT:
        return _DtPoly({1: RatFuncT.one()})
    if kind is NodeKind.NEGATION:
        return -_to_dt_poly(ast.children[0], text)
    if kind is NodeKind.SUM:
        acc = _DtPoly()
        for child in ast.children:
            acc = acc + _to_dt_poly(child, text)
        return acc
    if kind is NodeKind.PRODUCT:
        return _to_dt_poly(ast.children[0], text) * _to_dt_poly(ast.children[1], text)
    if kind is NodeKind.QUOTIENT:
        den = _to_dt_poly(ast.children[1], text)
        if not den.is_scalar():
            raise ExpressionSyntaxError("cannot divide by Dt", ast.children[1].offset, text)
        if den.scalar_value().is_zero:
            raise ZeroDenominator(
                f"denominator simplifies to zero at byte offset {ast.children[1].offset}"
            )
        return _to_dt_poly(ast.children[0], text).scale(den.scalar_value().inverse())
    if kind is NodeKind.POWER:
        base = _to_dt_poly(ast.children[0], text)
        if ast.value < 0:
            if not base.is_scalar():
                raise ExpressionSyntaxError("negative power of Dt", ast.offset, text)
            value = base.scalar_value()
            if value.is_zero:
                raise ZeroDenominator(f"zero raised to a negative power at byte offset {ast.offset}")
            return _DtPoly.scalar(value ** ast.value)
        acc = _DtPoly.scalar(RatFuncT.one())
        for _ in range(ast.value):
            acc = acc * base
        return acc
    raise ExpressionSyntaxError(f"unexpected {kind.value}", ast.offset, text)


def parse_operator(text: str) -> OreOperator:
    """Text such as ``Dt^2 - (1/t)*Dt^1`` to a differential operator."""
    ast = _Parser(text, allow_dt=True).parse()
    poly = _to_dt_poly(ast, text)
    if not poly.coeffs:
        return OreOperator.zero()
    order = max(poly.coeffs)
    return OreOperator([poly.coeffs.get(k, RatFuncT.zero()) for k in range(order + 1)])


# Printer

def _format_number(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomial(x_power: int, t_power: int) -> str:
    parts = []
    for name, power in (("t", t_power), ("x", x_power)):
        if power == 1:
            parts.append(name)
        elif power > 1:
            parts.append(f"{name}^{power}")
    return "*".join(parts)


def _format_terms(terms: Sequence[Tuple[int, int, Fraction]]) -> str:
    """Join (x power, t power, coefficient) triples, already in print order."""
    if not terms:
        return "0"
    out = []
    for index, (i, j, c) in enumerate(terms):
        mono = _monomial(i, j)
        mag = abs(c)
        if not mono:
            body = _format_number(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_number(mag)}*{mono}"
        if index == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


def _poly_terms(p) -> List[Tuple[int, int, Fraction]]:
    """Terms of a Q[t] or Q[x, t] Poly ordered by x-degree then t-degree, descending."""
    rows = []
    for monom, coeff in p.terms():
        if len(monom) == 2:
            i, j = monom
        else:
            i, j = 0, monom[0]
        rows.append((i, j, to_fraction(coeff)))
    rows.sort(key=lambda r: (r[0], r[1]), reverse=True)
    return rows


def _format_fraction(num, den) -> str:
    num_terms = _poly_terms(num)
    num_text = _format_terms(num_terms)
    if den.is_one:
        return num_text
    den_terms = _poly_terms(den)
    den_text = _format_terms(den_terms)
    if len(num_terms) > 1:
        num_text = f"({num_text})"
    if len(den_terms) > 1 or "*" in den_text:
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"


_ATOM_RE = re.compile(r"^[0-9tx^]+$")


@singledispatch
def serialize(value) -> str:
    """Canonical text of a value; parsing it back yields an equal value."""
    raise TypeError(f"cannot serialize {type(value).__name__}")


@serialize.register
def _(value: int) -> str:
    return str(value)


@serialize.register
def _(value: Fraction) -> str:
    return _format_number(value)


@serialize.register
def _(value: RatFuncT) -> str:
    return _format_fraction(value.num, value.den)


@serialize.register
def _(value: RatFuncXT) -> str:
    return _format_fraction(value.num, value.den)


@serialize.register
def _(value: OreOperator) -> str:
    if value.is_zero:
        return "0"
    out = []
    for k in range(value.order, -1, -1):
        c = value.coeffs[k]
        if c.is_zero:
            continue
        negative = c.is_negative()
        mag = -c if negative else c
        if mag == RatFuncT.one():
            body = f"Dt^{k}"
        else:
            text = serialize(mag)
            if not _ATOM_RE.match(text):
                text = f"({text})"
            body = f"{text}*Dt^{k}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


@serialize.register(list)
@serialize.register(tuple)
def _(value) -> str:
    return "[" + ", ".join(serialize(v) for v in value) + "]"


def canonical_text(text: str) -> str:
    """Parse and print back, the canonical form of rational-function text."""
    return serialize(parse_rational(text))


__all__ = [
    "ExprAst",
    "NodeKind",
    "canonical_text",
    "integer",
    "parse_expression",
    "parse_operator",
    "parse_rational",
    "parse_rational_q",
    "parse_rational_t",
    "serialize",
    "to_canonical",
    "tokenize",
    "var_t",
    "var_x",
]
