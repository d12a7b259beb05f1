"""Exact scalar types: rationals and elements of a real quadratic field Q(sqrt d)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq

Scalar = type(mpq(0))

__all__ = ["Scalar", "QuadExt", "to_scalar", "is_scalar", "parse_scalar", "scalar_str"]


def to_scalar(x) -> Scalar:
    """Coerce an int, Fraction, mpq or decimal string to an exact rational."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, type(gmpy2.mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def is_scalar(x) -> bool:
    return isinstance(x, (Scalar, QuadExt, int, Fraction)) and not isinstance(x, bool)


def parse_scalar(text: str) -> Scalar:
    """Parse '3', '-7/2', '1.25' or '1e-12' exactly (no binary floats involved)."""
    t = text.strip()
    if "/" in t:
        n, d = t.split("/", 1)
        return parse_scalar(n) / parse_scalar(d)
    f = Fraction(t)
    return mpq(f.numerator, f.denominator)


def scalar_str(x) -> str:
    if isinstance(x, QuadExt):
        return str(x)
    x = to_scalar(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadExt:
    """a + b*sqrt(d) with rational a, b and a fixed square-free d > 1.

    Mixed arithmetic with plain rationals is supported; mixing two
    different d raises ValueError (no field towers).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 2):
        if not _squarefree(int(d)):
            raise ValueError(f"d={d} is not a square-free integer > 1")
        self.a = to_scalar(a)
        self.b = to_scalar(b)
        self.d = int(d)

    @classmethod
    def sqrt(cls, d: int = 2) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"cannot mix Q(sqrt{self.d}) and Q(sqrt{other.d})")
            return other
        if is_scalar(other):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Scalar:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        num = self * o.conjugate()
        return QuadExt(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadExt(1, 0, self.d) / (self ** (-n))
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if is_scalar(other):
            return self.b == 0 and self.a == to_scalar(other)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d), decided without approximating sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def enclosure(self, bits: int = 64) -> tuple[Scalar, Scalar]:
        """Rational interval containing the value, with sqrt(d) bracketed to `bits` bits."""
        scale = 1 << bits
        r = gmpy2.isqrt(self.d * scale * scale)
        lo_s, hi_s = mpq(r, scale), mpq(r + 1, scale)
        if self.b >= 0:
            return self.a + self.b * lo_s, self.a + self.b * hi_s
        return self.a + self.b * hi_s, self.a + self.b * lo_s

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self):
        return f"QuadExt({scalar_str(self.a)}, {scalar_str(self.b)}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return scalar_str(self.a)
        root = f"sqrt{self.d}"
        bpart = root if self.b == 1 else f"-{root}" if self.b == -1 else f"{scalar_str(self.b)}*{root}"
        if self.a == 0:
            return bpart
        if bpart.startswith("-"):
            return f"{scalar_str(self.a)} - {bpart[1:]}"
        return f"{scalar_str(self.a)} + {bpart}"
