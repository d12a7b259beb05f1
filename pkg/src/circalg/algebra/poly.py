"""Sparse multivariate polynomials with exact coefficients.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by the natural
variable key, with no zero exponents.  Storage is order-agnostic; a
:class:`MonomialOrder` is only consulted when a leading term is needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .scalars import QuadExt, Scalar, is_scalar, scalar_str, to_scalar

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONO: Monomial = ()


@lru_cache(maxsize=None)
def var_key(name: str):
    """Natural sort key: R2 < R10, then plain string order."""
    parts = re.split(r"(\d+)", name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif var_key(v1) < var_key(v2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    """True if m1 divides m2."""
    d2 = dict(m2)
    return all(d2.get(v, 0) >= e for v, e in m1)


def mono_div(m1: Monomial, m2: Monomial) -> Monomial:
    """m1 / m2, assuming m2 divides m1."""
    d = dict(m1)
    for v, e in m2:
        r = d[v] - e
        if r < 0:
            raise ValueError("monomial does not divide")
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items(), key=lambda t: var_key(t[0])))


def mono_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    d = dict(m1)
    for v, e in m2:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items(), key=lambda t: var_key(t[0])))


def mono_gcd(m1: Monomial, m2: Monomial) -> Monomial:
    d2 = dict(m2)
    out = []
    for v, e in m1:
        e2 = d2.get(v, 0)
        if e2:
            out.append((v, min(e, e2)))
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_str(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


@dataclass(frozen=True)
class MonomialOrder:
    """Lexicographic or graded reverse lexicographic order.

    ``priority`` lists variables from highest to lowest.  Variables not
    listed rank below all listed ones, in natural order.
    """

    kind: str = "lex"
    priority: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "priority", tuple(self.priority))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.priority)})

    def extended(self, variables: Iterable[str]) -> "MonomialOrder":
        extra = sorted((v for v in set(variables) if v not in self._index), key=var_key)
        if not extra:
            return self
        return MonomialOrder(self.kind, self.priority + tuple(extra))

    def vector(self, m: Monomial) -> tuple:
        idx = self._index
        vec = [0] * len(self.priority)
        for v, e in m:
            try:
                vec[idx[v]] = e
            except KeyError:
                raise KeyError(f"variable {v!r} not covered by order; call extended()") from None
        return tuple(vec)

    def key(self, m: Monomial):
        vec = self.vector(m)
        if self.kind == "lex":
            return vec
        return (sum(vec), tuple(-e for e in reversed(vec)))


def _norm_coeff(c):
    if isinstance(c, QuadExt):
        return c.a if c.b == 0 else c
    return to_scalar(c)


class MultiPoly:
    """Immutable sparse polynomial: mapping Monomial -> nonzero coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None, _trusted: bool = False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for m, c in (terms or {}).items():
                c = _norm_coeff(c)
                if c:
                    clean[m] = c
            self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def symbol(cls, name: str) -> "MultiPoly":
        return cls({((name, 1),): to_scalar(1)}, _trusted=True)

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({ONE_MONO: c})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, str):
            from .parse import parse_poly

            return parse_poly(x)
        if is_scalar(x):
            return cls.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to MultiPoly")

    @classmethod
    def from_univariate(cls, coeffs, var: str) -> "MultiPoly":
        """Build from ascending coefficients (scalars or polys free of var)."""
        x = cls.symbol(var)
        out = cls()
        for i, c in enumerate(coeffs):
            if c:
                out = out + cls.coerce(c) * x ** i
        return out

    # basic queries ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == ONE_MONO for m in self.terms)

    def constant_term(self):
        return self.terms.get(ONE_MONO, to_scalar(0))

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self.constant_term()

    @property
    def variables(self) -> tuple:
        vs = {v for m in self.terms for v, _ in m}
        return tuple(sorted(vs, key=var_key))

    def degree(self, var: str | None = None) -> int:
        """Degree in `var`, or total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(mono_degree(m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def has_quad(self) -> bool:
        return any(isinstance(c, QuadExt) for c in self.terms.values())

    def __len__(self):
        return len(self.terms)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            other = MultiPoly.const(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = _norm_coeff(s + c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MultiPoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _norm_coeff(c)
        if not c:
            return MultiPoly()
        return MultiPoly({m: _norm_coeff(v * c) for m, v in self.terms.items()}, _trusted=True)

    def mul_term(self, mono: Monomial, c) -> "MultiPoly":
        c = _norm_coeff(c)
        if not c:
            return MultiPoly()
        return MultiPoly({mono_mul(m, mono): _norm_coeff(v * c) for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not is_scalar(other):
                return NotImplemented
            return self.scale(other)
        if not self.terms or not other.terms:
            return MultiPoly()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative exponent for a polynomial")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar only; use exact_div for polynomials."""
        if isinstance(other, MultiPoly):
            if not other.is_constant() or other.is_zero():
                return NotImplemented
            other = other.constant_term()
        if not is_scalar(other):
            return NotImplemented
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if isinstance(other, QuadExt):
            inv = QuadExt(1, 0, other.d) / other
        else:
            inv = 1 / to_scalar(other)
        return self.scale(inv)

    # equality ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if is_scalar(other):
            return self.terms == MultiPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # structure --------------------------------------------------------
    def leading_term(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order.extended(self.variables)
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coeff(self, order: MonomialOrder):
        return self.leading_term(order)[1]

    def sorted_terms(self, order: MonomialOrder):
        order = order.extended(self.variables)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def collect(self, var: str) -> list:
        """Coefficients (polys free of `var`) by ascending power of `var`."""
        if not self.terms:
            return [MultiPoly()]
        buckets: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            buckets.setdefault(e, {})[tuple(rest)] = c
        n = max(buckets)
        return [MultiPoly(buckets.get(i, {}), _trusted=True) for i in range(n + 1)]

    def coeff_of(self, var: str, power: int) -> "MultiPoly":
        c = self.collect(var)
        return c[power] if power < len(c) else MultiPoly()

    def substitute(self, bindings: Mapping) -> "MultiPoly":
        """Simultaneous substitution; unbound symbols pass through."""
        if not bindings:
            return self
        binds = {v: MultiPoly.coerce(b) for v, b in bindings.items()}
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = binds[v] ** e
            return powers[key]

        out = MultiPoly()
        acc: dict = {}
        for m, c in self.terms.items():
            keep = []
            factor = None
            for v, e in m:
                if v in binds:
                    p = power(v, e)
                    factor = p if factor is None else factor * p
                else:
                    keep.append((v, e))
            keep = tuple(keep)
            if factor is None:
                v0 = acc.get(keep)
                acc[keep] = c if v0 is None else v0 + c
            else:
                out = out + factor.mul_term(keep, c)
        return out + MultiPoly(acc)

    def diff(self, var: str) -> "MultiPoly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e:
                if e == 1:
                    del d[var]
                else:
                    d[var] = e - 1
                nm = tuple(sorted(d.items(), key=lambda t: var_key(t[0])))
                out[nm] = c * e
        return MultiPoly(out)

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly({m: fn(c) for m, c in self.terms.items()})

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return ONE_MONO
        for m in it:
            g = mono_gcd(g, m)
            if not g:
                break
        return g

    def content_primitive(self, order: MonomialOrder | None = None):
        """(content, primitive) with integer coprime primitive coefficients.

        The sign is chosen so that the primitive part has a positive
        leading coefficient under `order` (lex on natural variable order
        by default).
        """
        if not self.terms:
            return to_scalar(0), MultiPoly()
        if self.has_quad():
            raise ValueError("content_primitive needs rational coefficients")
        import gmpy2

        num_g = 0
        den_l = 1
        for c in self.terms.values():
            num_g = gmpy2.gcd(num_g, c.numerator)
            den_l = gmpy2.lcm(den_l, c.denominator)
        content = to_scalar(gmpy2.mpq(num_g, den_l))
        if order is None:
            order = MonomialOrder("lex")
        if self.leading_coeff(order) < 0:
            content = -content
        inv = 1 / content
        prim = MultiPoly({m: c * inv for m, c in self.terms.items()}, _trusted=True)
        return content, prim

    def primitive(self, order: MonomialOrder | None = None) -> "MultiPoly":
        return self.content_primitive(order)[1]

    def univariate_coeffs(self, var: str) -> list:
        """Ascending scalar coefficients; the polynomial must involve only `var`."""
        extra = [v for v in self.variables if v != var]
        if extra:
            raise ValueError(f"polynomial is not univariate in {var}: also has {extra}")
        n = self.degree(var)
        out = [to_scalar(0)] * (max(n, 0) + 1)
        for m, c in self.terms.items():
            out[m[0][1] if m else 0] = c
        return out

    # printing ---------------------------------------------------------
    def _print_order(self):
        return MonomialOrder("grevlex", self.variables)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms(self._print_order()):
            neg = False
            if isinstance(c, QuadExt):
                if c.a == 0 and c.b < 0:
                    neg, c = True, -c
                cs = str(c)
                if c.a != 0:
                    cs = f"({cs})"
            else:
                if c < 0:
                    neg, c = True, -c
                cs = scalar_str(c)
            ms = mono_str(m)
            if not ms:
                body = cs
            elif cs == "1":
                body = ms
            else:
                body = f"{cs}*{ms}"
            pieces.append((neg, body))
        first_neg, first = pieces[0]
        s = ("-" if first_neg else "") + first
        for neg, body in pieces[1:]:
            s += (" - " if neg else " + ") + body
        return s

    def __repr__(self):
        return f"MultiPoly('{self}')"


def poly_arith(op: str, p, q):
    """Dispatch helper: op in {add, sub, mul, pow}."""
    p = MultiPoly.coerce(p)
    if op == "pow":
        if not isinstance(q, int):
            raise TypeError("exponent must be an int")
        return p ** q
    q = MultiPoly.coerce(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def symbols(names: str):
    """symbols('x y z') -> tuple of MultiPoly symbols."""
    return tuple(MultiPoly.symbol(n) for n in names.replace(",", " ").split())


def substitute(p, bindings) -> MultiPoly:
    return MultiPoly.coerce(p).substitute(bindings)


def collect(p, var: str) -> list:
    return MultiPoly.coerce(p).collect(var)


def content_primitive(p, order: MonomialOrder | None = None):
    return MultiPoly.coerce(p).content_primitive(order)


def multivariate_divide(p, divisors, order: MonomialOrder):
    """Generalized division: p = sum(q_i * d_i) + r.

    No monomial of r is divisible by any leading monomial of the divisors.
    Coefficients may live in Q or Q(sqrt d).
    """
    p = MultiPoly.coerce(p)
    divisors = [MultiPoly.coerce(d) for d in divisors]
    if any(d.is_zero() for d in divisors):
        raise ZeroDivisionError("zero divisor in multivariate_divide")
    allvars = set(p.variables)
    for d in divisors:
        allvars.update(d.variables)
    order = order.extended(allvars)
    key = order.key
    leads = [d.leading_term(order) for d in divisors]
    quotients: list[dict] = [{} for _ in divisors]
    rem: dict = {}
    work = dict(p.terms)
    import heapq

    heap = [_Desc(key(m), m) for m in work]
    heapq.heapify(heap)
    while heap:
        item = heapq.heappop(heap)
        m = item.mono
        c = work.pop(m, None)
        if c is None:
            continue
        while heap and heap[0].mono == m:
            heapq.heappop(heap)
        for i, (lm, lc) in enumerate(leads):
            if mono_divides(lm, m):
                qm = mono_div(m, lm)
                qc = c / lc
                quotients[i][qm] = quotients[i].get(qm, 0) + qc
                for dm, dc in divisors[i].terms.items():
                    if dm == lm:
                        continue
                    nm = mono_mul(dm, qm)
                    old = work.get(nm)
                    new = -qc * dc if old is None else _norm_coeff(old - qc * dc)
                    if new:
                        if old is None:
                            heapq.heappush(heap, _Desc(key(nm), nm))
                        work[nm] = new
                    else:
                        work.pop(nm, None)
                break
        else:
            rem[m] = c
    return [MultiPoly(q) for q in quotients], MultiPoly(rem)


class _Desc:
    """Heap entry ordering monomials from largest to smallest."""

    __slots__ = ("k", "mono")

    def __init__(self, k, mono):
        self.k = k
        self.mono = mono

    def __lt__(self, other):
        return self.k > other.k


def exact_div(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """p / q when q divides p exactly; ArithmeticError otherwise."""
    if q.is_zero():
        raise ZeroDivisionError("exact_div by zero polynomial")
    if q.is_constant():
        return p / q.constant_term()
    vs = set(p.variables) | set(q.variables)
    order = MonomialOrder("lex", tuple(sorted(vs, key=var_key)))
    (quo,), rem = multivariate_divide(p, [q], order)
    if rem:
        raise ArithmeticError(f"{q} does not divide {p}")
    return quo
