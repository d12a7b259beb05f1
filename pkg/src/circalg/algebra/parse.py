"""Text syntax for polynomials: ``3*R1*C1*s^2 - 1/2``, ``(280 - 196*sqrt2)*R4^4``.

Division is allowed only by constants.  ``sqrtN`` (N square-free) denotes the
square root of N.  ``str(p)`` is accepted back by :func:`parse_poly`.
"""

from __future__ import annotations

import re

from .poly import MultiPoly
from .scalars import QuadExt, parse_scalar


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)
_SQRT = re.compile(r"sqrt(\d+)$")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError("unexpected character", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.take()
        if t[1] != val:
            raise PolySyntaxError(f"expected {val!r}", self.text, t[2])

    def parse(self) -> MultiPoly:
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise PolySyntaxError(f"unexpected {t[1]!r}", self.text, t[2])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise PolySyntaxError("division by a non-constant or zero", self.text, pos)
                p = p / q.constant_term()
        return p

    def unary(self):
        t = self.peek()
        if t[1] == "-":
            self.take()
            return -self.unary()
        if t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            t = self.take()
            if t[0] != "num" or not t[1].isdigit():
                raise PolySyntaxError("exponent must be a non-negative integer", self.text, t[2])
            base = base ** int(t[1])
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.const(parse_scalar(val))
        if kind == "name":
            m = _SQRT.match(val)
            if m:
                return MultiPoly.const(QuadExt.sqrt(int(m.group(1))))
            return MultiPoly.symbol(val)
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_poly(text: str) -> MultiPoly:
    return _Parser(text).parse()
