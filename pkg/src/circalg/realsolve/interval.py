"""Closed rational intervals with outward-exact arithmetic (endpoints are mpq)."""

from __future__ import annotations

from gmpy2 import mpq

from ..algebra.poly import MultiPoly
from ..algebra.scalars import QuadExt, to_scalar


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = to_scalar(lo)
        hi = lo if hi is None else to_scalar(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def coerce(cls, x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if isinstance(x, QuadExt):
            return cls(*x.enclosure(128))
        return cls(x)

    def __add__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        o = Interval.coerce(other)
        if o.lo == o.hi and self.lo == self.hi:
            v = self.lo * o.lo
            return Interval(v, v)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval.coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"interval divisor {o} contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return Interval(1) / (self ** (-n))
        if n == 0:
            return Interval(1)
        lo_n, hi_n = self.lo ** n, self.hi ** n
        if n % 2 == 1 or self.lo >= 0:
            return Interval(min(lo_n, hi_n), max(lo_n, hi_n))
        if self.hi <= 0:
            return Interval(hi_n, lo_n)
        return Interval(0, max(lo_n, hi_n))

    def contains(self, x) -> bool:
        x = to_scalar(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self):
        """+1/-1 when certain, 0 for the point 0, None when the sign is ambiguous."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))


def eval_interval(p: MultiPoly, env: dict) -> Interval:
    """Evaluate p with each variable replaced by an Interval (or exact scalar)."""
    env = {v: Interval.coerce(x) for v, x in env.items()}
    missing = set(p.variables) - set(env)
    if missing:
        raise KeyError(f"no value for {sorted(missing)}")
    powers: dict = {}
    total = Interval(0)
    for m, c in p.terms.items():
        term = Interval.coerce(c)
        for v, e in m:
            key = (v, e)
            if key not in powers:
                powers[key] = env[v] ** e
            term = term * powers[key]
        total = total + term
    return total


def mpq_to_decimal(x, digits: int) -> str:
    """Round an exact rational to `digits` significant digits, as a decimal string."""
    x = mpq(x)
    if x == 0:
        return "0"
    neg = x < 0
    x = abs(x)
    # find exponent e with 10^e <= x < 10^(e+1)
    e = len(str(x.numerator)) - len(str(x.denominator))
    if mpq(10) ** e > x:
        e -= 1
    elif mpq(10) ** (e + 1) <= x:
        e += 1
    scale = digits - 1 - e
    scaled = x * mpq(10) ** scale if scale >= 0 else x / mpq(10) ** (-scale)
    n = int((scaled + mpq(1, 2)).__floor__())
    if len(str(n)) > digits:  # rounding carried into a new digit
        n //= 10
        scale -= 1
    s = str(n)
    if scale > 0:
        if len(s) <= scale:
            s = "0." + "0" * (scale - len(s)) + s
        else:
            s = s[: len(s) - scale] + "." + s[len(s) - scale :]
    elif scale < 0:
        s = s + "0" * (-scale)
    return ("-" if neg else "") + s


def certified_digits(iv: Interval, max_digits: int = 40) -> str:
    """Decimal string for an interval, never claiming more digits than its width supports."""
    if iv.lo == iv.hi:
        return mpq_to_decimal(iv.lo, max_digits)
    for d in range(max_digits, 0, -1):
        a, b = mpq_to_decimal(iv.lo, d), mpq_to_decimal(iv.hi, d)
        if a == b:
            return a
    return mpq_to_decimal(iv.mid, 1) + "(?)"
