"""Parser and printer for the holoq expression language.

Grammar (see ``docs/grammar.ebnf``)::

    expr    = term { ("+" | "-") term }
    term    = unary { ("*" | "/") unary }
    unary   = "-" unary | power
    power   = primary [ "^" unary ]
    primary = number | "p" | "i" | "j" | "k" | name "(" expr ")" | "(" expr ")"

``a - b`` is read as ``a + (-b)`` and ``a / b`` as ``a * recip(b)``.  An
exponent must be a constant expression with an integer value.  The unit
constants ``i``, ``j`` and ``k`` produce raw-mode trees.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, NonIntegerExponent, UnknownIdentifier
from .expr import (
    BUILTIN_NAMES,
    UNARY_BUILTINS,
    Add,
    Mul,
    Neg,
    PowInt,
    QFunction,
    QuatConst,
    RealConst,
    Recip,
    Sub,
    Var,
    raw_product,
)
from .quaternion import I, J, K, Quaternion

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)

UNITS = {"i": I, "j": J, "k": K}


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    start: int  # character offsets
    end: int


@dataclass(frozen=True)
class SourceExpr:
    text: str
    tokens: tuple[Token, ...]


def _byte_span(text: str, start: int, end: int) -> tuple[int, int]:
    return (len(text[:start].encode()), len(text[:end].encode()))


def tokenize(text: str) -> SourceExpr:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_span(text, pos, pos + 1), text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    tokens.append(Token("end", "", n, n))
    return SourceExpr(text, tuple(tokens))


class _Parser:
    def __init__(self, src: SourceExpr):
        self.text = src.text
        self.tokens = src.tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, cls, message, start, end):
        return cls(message, _byte_span(self.text, start, end), self.text)

    def expect(self, op: str) -> Token:
        t = self.tok
        if t.kind != "op" or t.text != op:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise self.error(ExprSyntaxError, f"expected {op!r}, found {found}", t.start, max(t.end, t.start + 1))
        return self.advance()

    def parse(self) -> QFunction:
        node = self.expr()
        t = self.tok
        if t.kind != "end":
            raise self.error(ExprSyntaxError, f"unexpected {t.text!r} (implicit multiplication is not allowed)", t.start, t.end)
        return node

    def expr(self) -> QFunction:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Add(node, Neg(rhs))
        return node

    def term(self) -> QFunction:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            rhs = self.unary()
            node = raw_product(node, rhs) if op == "*" else raw_product(node, Recip(rhs))
        return node

    def unary(self) -> QFunction:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> QFunction:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            start = self.tok.start
            exponent = self.unary()
            end = self.tokens[self.i - 1].end
            return PowInt(base, self.integer_exponent(exponent, start, end))
        return base

    def integer_exponent(self, node: QFunction, start: int, end: int) -> int:
        if any(isinstance(n, (Var, QuatConst)) for n in node.walk()):
            raise self.error(NonIntegerExponent, "exponent must be a constant integer", start, end)
        try:
            value = node.value_at(Quaternion())
        except (DomainError, ZeroDivisionError, OverflowError):
            raise self.error(NonIntegerExponent, "exponent is not a finite number", start, end) from None
        if value.y or value.z or value.u or not value.x == value.x or abs(value.x) == float("inf"):
            raise self.error(NonIntegerExponent, "exponent is not a finite real number", start, end)
        if value.x != int(value.x):
            raise self.error(NonIntegerExponent, f"exponent {value.x!r} is not an integer", start, end)
        return int(value.x)

    def primary(self) -> QFunction:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return RealConst(float(t.text))
        if t.kind == "name":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if t.text not in UNARY_BUILTINS:
                    raise self.error(UnknownIdentifier, f"unknown function {t.text!r}", t.start, t.end)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return UNARY_BUILTINS[t.text](arg)
            if t.text == "p":
                return Var()
            if t.text in UNITS:
                return QuatConst(UNITS[t.text])
            if t.text in UNARY_BUILTINS:
                raise self.error(ExprSyntaxError, f"function {t.text!r} needs an argument in parentheses", t.start, t.end)
            raise self.error(UnknownIdentifier, f"unknown identifier {t.text!r}", t.start, t.end)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise self.error(ExprSyntaxError, f"expected an operand, found {found}", t.start, max(t.end, t.start + 1) if t.kind != "end" else t.end)


def parse(text: str) -> QFunction:
    """Parse ``text`` into an expression tree.

    Raises :class:`ExprSyntaxError`, :class:`NonIntegerExponent` or
    :class:`UnknownIdentifier`, each carrying a byte span into ``text``.
    """
    return _Parser(tokenize(text)).parse()


# Printing ---------------------------------------------------------------------

# binding strength of each printed form
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def _number(c: float) -> str:
    if c == int(c) and abs(c) < 1e16:
        return str(int(c))
    return repr(c)


def _quat(q: Quaternion) -> str:
    for name, unit in UNITS.items():
        if q == unit:
            return name
    parts = [_number(q.x)]
    for c, name in ((q.y, "i"), (q.z, "j"), (q.u, "k")):
        parts.append(f"{_number(c)}*{name}")
    return "(" + " + ".join(parts) + ")"


def _fmt(f: QFunction) -> tuple[str, int]:
    if isinstance(f, Var):
        return "p", _ATOM
    if isinstance(f, RealConst):
        s = _number(f.c)
        return (s, _ATOM) if f.c >= 0 and not s.startswith("-") else (s, _UNARY)
    if isinstance(f, QuatConst):
        return _quat(f.q), _ATOM
    if isinstance(f, Add):
        left = _wrap(f.left, _ADD)
        if isinstance(f.right, Neg):
            return f"{left} - {_wrap(f.right.arg, _MUL)}", _ADD
        return f"{left} + {_wrap(f.right, _MUL)}", _ADD
    if isinstance(f, Sub):
        return f"{_wrap(f.left, _ADD)} - {_wrap(f.right, _MUL)}", _ADD
    if isinstance(f, Mul):
        return f"{_wrap(f.left, _MUL)}*{_wrap(f.right, _UNARY)}", _MUL
    if isinstance(f, Neg):
        return f"-{_wrap(f.arg, _UNARY)}", _UNARY
    if isinstance(f, PowInt):
        return f"{_wrap(f.base, _ATOM)}^{f.n}", _POW
    name = BUILTIN_NAMES.get(type(f))
    if name is not None:
        return f"{name}({format_expr(f.arg)})", _ATOM
    raise TypeError(f"cannot format {type(f).__name__}")


def _wrap(f: QFunction, min_level: int) -> str:
    s, level = _fmt(f)
    return s if level >= min_level else f"({s})"


def format_expr(f: QFunction) -> str:
    """Render ``f`` in the expression language.

    For every tree the parser can produce, ``parse(format_expr(f)) == f``.
    """
    return _fmt(f)[0]

