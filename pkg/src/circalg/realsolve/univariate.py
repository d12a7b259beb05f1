"""Dense univariate polynomials, Sturm sequences and certified real-root isolation.

Dense polynomials are lists of coefficients in ascending order (mpq, or
QuadExt for Q(sqrt d) coefficients).  Root counting always runs on exact
rationals; Q(sqrt d) polynomials are handled through their rational norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

from ..algebra.poly import MultiPoly
from ..algebra.scalars import QuadExt, to_scalar
from .interval import Interval

ZERO = mpq(0)
ONE = mpq(1)


# dense arithmetic ----------------------------------------------------------


def trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p: list) -> int:
    return len(trim(p)) - 1


def lc(p: list):
    return p[-1]


def add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: list, q: list) -> list:
    return add(p, [-c for c in q])


def mul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(p: list, c) -> list:
    return trim([a * c for a in p])


def deriv(p: list) -> list:
    return trim([p[i] * i for i in range(1, len(p))])


def divmod_(p: list, q: list):
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(p) < len(q):
        return [], p
    r = list(p)
    dq = len(q) - 1
    lq = q[-1]
    quo = [ZERO] * (len(p) - dq)
    for k in range(len(p) - 1, dq - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c / lq
        quo[k - dq] = c
        for i in range(dq + 1):
            r[k - dq + i] = r[k - dq + i] - c * q[i]
    return trim(quo), trim(r[:dq])


def rem(p: list, q: list) -> list:
    return divmod_(p, q)[1]


def monic(p: list) -> list:
    p = trim(p)
    if not p:
        return p
    return [c / p[-1] for c in p]


def primitive_positive(p: list) -> list:
    """Rescale a rational polynomial by a positive rational to coprime integers."""
    p = trim(p)
    if not p:
        return p
    g = mpz(0)
    l = mpz(1)
    for c in p:
        c = mpq(c)
        g = gmpy2.gcd(g, c.numerator)
        l = gmpy2.lcm(l, c.denominator)
    f = mpq(l, g)
    return [mpq(c) * f for c in p]


def gcd(p: list, q: list) -> list:
    p, q = trim(p), trim(q)
    while q:
        p, q = q, primitive_positive(rem(p, q))
    return monic(p)


def squarefree_decomposition(p: list) -> list:
    """Yun's algorithm: [(factor, multiplicity), ...] with p = c * prod factor^mult."""
    p = trim(p)
    if degree(p) <= 0:
        return []
    out = []
    a = gcd(p, deriv(p))
    b = divmod_(p, a)[0]
    c = divmod_(deriv(p), a)[0]
    d = sub(c, deriv(b))
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        b_next = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        if degree(a) > 0:
            out.append((monic(a), i))
        b = b_next
        d = sub(c, deriv(b))
        i += 1
    return out


def squarefree_part(p: list) -> list:
    p = trim(p)
    if degree(p) <= 0:
        return p
    return monic(divmod_(p, gcd(p, deriv(p)))[0])


def evaluate(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _int_coeffs(p: list) -> list:
    return [int(c) for c in primitive_positive(p)]


def sign_at(p_int: list, x) -> int:
    """Sign of an integer-coefficient polynomial at a rational point, exactly."""
    x = mpq(x)
    n, d = mpz(x.numerator), mpz(x.denominator)
    acc = mpz(0)
    dpow = mpz(1)
    first = True
    for c in reversed(p_int):
        if first:
            acc = mpz(c)
            first = False
        else:
            dpow *= d
            acc = acc * n + c * dpow
    return (acc > 0) - (acc < 0)


def quad_sign_at(p: list, x) -> int:
    """Exact sign of a Q(sqrt d)-coefficient polynomial at rational x."""
    v = evaluate(p, mpq(x))
    if isinstance(v, QuadExt):
        return v.sign()
    return (v > 0) - (v < 0)


def cauchy_bound(p: list) -> mpq:
    """Power of two strictly greater than every root's absolute value."""
    p = trim(p)
    top = abs(p[-1])
    m = max((abs(c) / top for c in p[:-1]), default=ZERO)
    b = mpq(1)
    while b <= 1 + m:
        b *= 2
    return b


# Sturm sequences -----------------------------------------------------------


@dataclass
class SturmSequence:
    """p, p', then negated remainders, each rescaled by a positive factor."""

    chain: list

    @classmethod
    def of(cls, p: list) -> "SturmSequence":
        p = primitive_positive(trim(p))
        chain = [p]
        q = primitive_positive(deriv(p))
        while q:
            chain.append(q)
            r = rem(chain[-2], chain[-1])
            q = primitive_positive([-c for c in r])
        return cls(chain)

    def __post_init__(self):
        self._ints = [_int_coeffs(c) for c in self.chain]

    def variations(self, x) -> int:
        signs = [s for s in (sign_at(c, x) for c in self._ints) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def variations_at_infinity(self, positive: bool) -> int:
        signs = []
        for c in self.chain:
            s = 1 if c[-1] > 0 else -1
            if not positive and (len(c) - 1) % 2 == 1:
                s = -s
            signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, a, b) -> int:
        """Number of distinct real roots in the half-open interval (a, b]."""
        return self.variations(a) - self.variations(b)

    def total(self) -> int:
        return self.variations_at_infinity(False) - self.variations_at_infinity(True)


# isolating intervals -------------------------------------------------------


@dataclass(frozen=True)
class IsolatingInterval:
    """Exactly one root of `poly` in (lo, hi); lo == hi marks an exact rational root.

    `_sqf` holds the square-free dense coefficients used for sign tests.
    """

    lo: mpq
    hi: mpq
    poly: MultiPoly
    var: str = "x"
    multiplicity: int = 1
    _sqf: tuple = field(default=(), repr=False, compare=False)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def sign(self, x) -> int:
        return quad_sign_at(list(self._sqf), x)

    def __float__(self):
        return float(self.mid)


def _dense(p, var=None):
    if isinstance(p, MultiPoly):
        vs = p.variables
        if len(vs) > 1:
            raise ValueError(f"expected a univariate polynomial, got variables {vs}")
        var = var or (vs[0] if vs else "x")
        return [c for c in p.univariate_coeffs(var)], var
    return [c if isinstance(c, QuadExt) else to_scalar(c) for c in p], var or "x"


def _as_multipoly(dense, var):
    return MultiPoly.from_univariate(dense, var)


def _isolate_rational(sqf: list, lo=None, hi=None):
    """Isolate the roots of a square-free rational polynomial in (lo, hi]."""
    if degree(sqf) <= 0:
        return []
    st = SturmSequence.of(sqf)
    pint = st._ints[0]
    if lo is None:
        b = cauchy_bound(sqf)
        lo, hi = -b, b
    out = []
    stack = [(mpq(lo), mpq(hi), st.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if sign_at(pint, b) == 0:
                out.append((b, b))
                continue
            while sign_at(pint, a) == 0:
                m = (a + b) / 2
                if sign_at(pint, m) == 0:
                    a = b = m
                    break
                if st.count(m, b) == 1:
                    a = m
                else:
                    b = m
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b, st.count(m, b)))
        stack.append((a, m, n - stack[-1][2]))
    out.sort()
    return out


def isolate_real_roots(p, var: str | None = None, lo=None, hi=None) -> list:
    """Certified isolating intervals for the distinct real roots of p.

    p may be a univariate MultiPoly or a dense coefficient list, with
    rational or Q(sqrt d) coefficients.  Optional bounds restrict the search
    to (lo, hi].  Multiplicities come from a square-free decomposition.
    """
    dense, var = _dense(p, var)
    dense = trim(dense)
    if not dense:
        raise ValueError("the zero polynomial has no isolated roots")
    if degree(dense) == 0:
        return []
    poly_mp = _as_multipoly(dense, var)
    quad = any(isinstance(c, QuadExt) for c in dense)
    if quad:
        return _isolate_quad(dense, var, poly_mp, lo, hi)
    factors = squarefree_decomposition(dense)
    sqf = squarefree_part(dense)
    results = []
    for a, b in _isolate_rational(sqf, lo, hi):
        mult = 1
        for f, k in factors:
            if degree(f) > 0 and _root_of(f, a, b, sqf):
                mult = k
                break
        results.append(IsolatingInterval(a, b, poly_mp, var, mult, tuple(sqf)))
    return results


def _root_of(f: list, a, b, sqf: list) -> bool:
    """Does the unique root of sqf in (a, b] (or the point a == b) annihilate f?"""
    if a == b:
        return evaluate(f, a) == 0
    return SturmSequence.of(f).count(a, b) > 0


def _isolate_quad(dense: list, var: str, poly_mp, lo, hi) -> list:
    d = next(c.d for c in dense if isinstance(c, QuadExt))
    conj = [c.conjugate() if isinstance(c, QuadExt) else c for c in dense]
    prod = mul(dense, conj)
    norm = []
    for c in prod:
        if isinstance(c, QuadExt):
            if c.b != 0:
                raise ArithmeticError("norm polynomial is not rational")
            c = c.a
        norm.append(mpq(c))
    sqf_norm = squarefree_part(norm)
    results = []
    for a, b in _isolate_rational(sqf_norm, lo, hi):
        if a == b:
            if quad_sign_at(dense, a) == 0:
                results.append(IsolatingInterval(a, b, poly_mp, var, 1, tuple(dense)))
            continue
        sa, sb = quad_sign_at(dense, a), quad_sign_at(dense, b)
        if sa * sb < 0:
            results.append(IsolatingInterval(a, b, poly_mp, var, 1, tuple(dense)))
        elif sa == 0 or sb == 0:
            raise ArithmeticError("root on an isolating endpoint")
        else:
            # the root belongs to the conjugate unless it is an even-multiplicity root of p
            cs = quad_sign_at(conj, a) * quad_sign_at(conj, b)
            if cs > 0:
                raise ArithmeticError("cannot attribute a root of the norm polynomial")
    return results


def refine(iv: IsolatingInterval, eps) -> IsolatingInterval:
    """Bisect with exact rational endpoints until hi - lo < eps."""
    eps = to_scalar(eps)
    if iv.exact or iv.width < eps:
        return iv
    lo, hi = iv.lo, iv.hi
    dense = list(iv._sqf)
    quad = any(isinstance(c, QuadExt) for c in dense)
    if quad:
        sgn = lambda x: quad_sign_at(dense, x)  # noqa: E731
    else:
        pint = _int_coeffs(dense)
        sgn = lambda x: sign_at(pint, x)  # noqa: E731
    s_lo = sgn(lo)
    while hi - lo >= eps:
        m = (lo + hi) / 2
        s = sgn(m)
        if s == 0:
            lo = hi = m
            break
        if s == s_lo:
            lo = m
        else:
            hi = m
    return IsolatingInterval(lo, hi, iv.poly, iv.var, iv.multiplicity, iv._sqf)


def exact_rational_root(iv: IsolatingInterval, max_bits: int = 512):
    """Return the root as an exact rational if it is one with a modest denominator."""
    if iv.exact:
        return iv.lo
    dense = list(iv._sqf)
    if any(isinstance(c, QuadExt) for c in dense):
        return None
    pint = _int_coeffs(dense)
    # a rational root n/d of an integer polynomial has d | leading coefficient
    lead = abs(pint[-1])
    cur = iv
    for bits in (64, 128, 256, max_bits):
        cur = refine(cur, mpq(1, 2**bits))
        if cur.exact:
            return cur.lo
        mid = cur.mid
        guess = Fraction(int(mid.numerator), int(mid.denominator)).limit_denominator(int(lead))
        g = mpq(guess.numerator, guess.denominator)
        if cur.lo < g < cur.hi and sign_at(pint, g) == 0:
            return g
    return None


def count_roots(p, a, b) -> int:
    """Distinct real roots of a rational polynomial in (a, b]."""
    dense, _ = _dense(p)
    return SturmSequence.of(squarefree_part(dense)).count(mpq(a), mpq(b))
