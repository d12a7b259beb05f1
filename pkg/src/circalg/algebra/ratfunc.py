"""Quotients of MultiPolys.  No gcd cancellation beyond content and monomial factors."""

from __future__ import annotations

from dataclasses import dataclass

from .poly import MultiPoly, mono_div, mono_gcd, ONE_MONO
from .scalars import is_scalar, to_scalar


def _strip_common(n: MultiPoly, d: MultiPoly):
    """Remove a shared monomial factor and make the pair jointly primitive."""
    if n.is_zero():
        return n, MultiPoly.const(1)
    mn, md = n.monomial_content(), d.monomial_content()
    g = mono_gcd(mn, md)
    if g != ONE_MONO:
        n = MultiPoly({mono_div(m, g): c for m, c in n.terms.items()}, _trusted=True)
        d = MultiPoly({mono_div(m, g): c for m, c in d.terms.items()}, _trusted=True)
    if n.has_quad() or d.has_quad():
        return n, d
    cd, _ = d.content_primitive()
    cn, _ = n.content_primitive()
    # joint content: gcd of numerators over lcm of denominators
    from gmpy2 import gcd as igcd, lcm as ilcm, mpq

    num_g = igcd(abs(cn.numerator), abs(cd.numerator))
    den_l = ilcm(cn.denominator, cd.denominator)
    f = mpq(den_l, num_g)
    if cd < 0:
        f = -f
    return n * f, d * f


@dataclass(frozen=True, eq=False)
class RationalFunction:
    num: MultiPoly
    den: MultiPoly

    def __post_init__(self):
        object.__setattr__(self, "num", MultiPoly.coerce(self.num))
        object.__setattr__(self, "den", MultiPoly.coerce(self.den))
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(MultiPoly.coerce(x), MultiPoly.const(1))

    def normalized(self) -> "RationalFunction":
        n, d = _strip_common(self.num, self.den)
        vs = set(n.variables) | set(d.variables)
        if len(vs) == 1 and not (n.has_quad() or d.has_quad()):
            n, d = _cancel_univariate(n, d, vs.pop())
        return RationalFunction(n, d)

    def __add__(self, other):
        o = RationalFunction.coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den).normalized()
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den).normalized()

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den).normalized()

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (MultiPoly, str)) or is_scalar(other):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def substitute(self, bindings) -> "RationalFunction":
        """Substitute polynomial or rational-function values for symbols."""
        poly_b, rat_b = {}, {}
        for k, v in bindings.items():
            if isinstance(v, RationalFunction) and not v.den.is_constant():
                rat_b[k] = v
            else:
                if isinstance(v, RationalFunction):
                    v = v.num / v.den.constant_term()
                poly_b[k] = MultiPoly.coerce(v) if not is_scalar(v) else MultiPoly.const(to_scalar(v))
        n, d = self.num.substitute(poly_b), self.den.substitute(poly_b)
        if rat_b:
            return (_subst_rat(n, rat_b) / _subst_rat(d, rat_b)).normalized()
        return RationalFunction(n, d)

    def evaluate(self, env: dict):
        n = self.num.substitute({k: MultiPoly.const(v) for k, v in env.items()})
        d = self.den.substitute({k: MultiPoly.const(v) for k, v in env.items()})
        return n.constant_value() / d.constant_value()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num) if len(self.num) <= 1 and "/" not in str(self.num) else f"({self.num})"
        d = str(self.den) if len(self.den) == 1 and "*" not in str(self.den) else f"({self.den})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({str(self.num)!r}, {str(self.den)!r})"


def _cancel_univariate(n: MultiPoly, d: MultiPoly, var: str):
    from ..realsolve import univariate as U

    nd = n.univariate_coeffs(var) if var in n.variables else [n.constant_term()]
    dd = d.univariate_coeffs(var) if var in d.variables else [d.constant_term()]
    g = U.gcd(nd, dd)
    if U.degree(g) <= 0:
        return n, d
    qn, _ = U.divmod_(nd, g)
    qd, _ = U.divmod_(dd, g)
    return _strip_common(MultiPoly.from_univariate(qn, var), MultiPoly.from_univariate(qd, var))


def _subst_rat(p: MultiPoly, rat_b: dict) -> RationalFunction:
    acc = RationalFunction.coerce(0)
    for m, c in p.terms.items():
        term = RationalFunction.coerce(MultiPoly.const(c))
        rest = []
        for v, e in m:
            if v in rat_b:
                r = rat_b[v]
                term = term * RationalFunction(r.num ** e, r.den ** e)
            else:
                rest.append((v, e))
        term = term * MultiPoly({tuple(rest): 1})
        acc = acc + term
    return acc



def parse_rational(text: str) -> RationalFunction:
    """Parse an expression that may divide by polynomials, e.g. ``1/(C1*s) + R``."""
    import re

    from .parse import PolySyntaxError
    from .scalars import QuadExt, parse_scalar

    tok_re = re.compile(
        r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
        r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()]))"
    )
    toks = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = tok_re.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError("unexpected character", text, pos)
        toks.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        r = term()
        while peek()[1] in ("+", "-"):
            op = take()[1]
            q = term()
            r = r + q if op == "+" else r - q
        return r

    def term():
        r = unary()
        while peek()[1] in ("*", "/"):
            _, op, p = take()
            q = unary()
            if op == "*":
                r = r * q
            else:
                if q.is_zero():
                    raise PolySyntaxError("division by zero", text, p)
                r = r / q
        return r

    def unary():
        if peek()[1] == "-":
            take()
            return -unary()
        if peek()[1] == "+":
            take()
            return unary()
        return power()

    def power():
        b = atom()
        if peek()[1] in ("^", "**"):
            take()
            t = take()
            if t[0] != "num" or not t[1].isdigit():
                raise PolySyntaxError("exponent must be a non-negative integer", text, t[2])
            n = int(t[1])
            b = RationalFunction(b.num**n, b.den**n)
        return b

    def atom():
        kind, val, p = take()
        if kind == "num":
            return RationalFunction.coerce(MultiPoly.const(parse_scalar(val)))
        if kind == "name":
            if re.fullmatch(r"sqrt\d+", val):
                return RationalFunction.coerce(MultiPoly.const(QuadExt.sqrt(int(val[4:]))))
            return RationalFunction.coerce(MultiPoly.symbol(val))
        if val == "(":
            r = expr()
            if take()[1] != ")":
                raise PolySyntaxError("expected ')'", text, p)
            return r
        raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", text, p)

    out = expr()
    if peek()[0] != "end":
        raise PolySyntaxError(f"unexpected {peek()[1]!r}", text, peek()[2])
    return out.normalized()
