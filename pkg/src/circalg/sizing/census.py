"""Exact count of complex solutions whose coefficient symbols are real and Hurwitz.

The real pipeline only sees real solution boxes.  A design may also have
solutions with complex element values whose denominator coefficients
a1..an are nevertheless real and Hurwitz; this module counts those without
isolating complex roots.

Requirement: the lex basis is in shape position over the eliminant variable
t (each unknown is a polynomial in t modulo the eliminant P).  Then the
solutions are the roots of P, the coefficient symbols are functions g_i(t)
in A = Q[t]/(P), and a separating linear form h = sum c_i g_i generates the
subalgebra Q[g_1..g_n] as Q[h] = Q[y]/(m(y)).  Each real root rho of m is a
real point a*, and the number of solutions above it is the trace of the
Lagrange idempotent of rho, an integer read off a certified interval.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from gmpy2 import mpq

from ..realsolve import univariate as U
from ..realsolve.hurwitz import HurwitzUndecidable, hurwitz_stable
from ..realsolve.interval import Interval, certified_digits

log = logging.getLogger(__name__)


@dataclass
class CensusPoint:
    values: dict  # symbol -> Interval
    multiplicity: int
    hurwitz: bool | None

    def to_json(self, digits: int = 15) -> dict:
        return {
            "values": {k: certified_digits(v, digits) for k, v in self.values.items()},
            "solutions_above": self.multiplicity,
            "hurwitz": self.hurwitz,
        }


@dataclass
class HurwitzCensus:
    solutions: int  # distinct complex solutions (degree of the squarefree eliminant)
    distinct_points: int  # distinct complex points of the coefficient projection
    points: list = field(default_factory=list)  # real projection points
    form: tuple = ()

    @property
    def hurwitz_solutions(self) -> int:
        return sum(p.multiplicity for p in self.points if p.hurwitz)

    def to_json(self, digits: int = 15) -> dict:
        return {
            "complex_solutions": self.solutions,
            "coefficient_points": self.distinct_points,
            "real_coefficient_points": len(self.points),
            "hurwitz_solutions_over_C": self.hurwitz_solutions,
            "separating_form": list(self.form),
            "points": [p.to_json(digits) for p in self.points],
        }


class _Echelon:
    """Incremental row echelon form over Q with combination tracking."""

    def __init__(self):
        self.rows = []  # (pivot, vec dict, combo dict)
        self.size = 0

    def reduce(self, vec: list):
        w = {i: c for i, c in enumerate(vec) if c}
        acc: dict = {}
        for piv, row, combo in self.rows:
            c = w.get(piv)
            if not c:
                continue
            for i, x in row.items():
                v = w.get(i, 0) - c * x
                if v:
                    w[i] = v
                else:
                    w.pop(i, None)
            for j, x in combo.items():
                v = acc.get(j, 0) + c * x
                if v:
                    acc[j] = v
                else:
                    acc.pop(j, None)
        return w, acc

    def add(self, vec: list):
        """Returns None if vec was independent (and adds it), else its coordinates."""
        w, acc = self.reduce(vec)
        if not w:
            return acc
        piv = max(w)
        inv = 1 / w[piv]
        combo = {j: -x * inv for j, x in acc.items()}
        combo[self.size] = inv
        self.rows.append((piv, {i: x * inv for i, x in w.items()}, combo))
        self.size += 1
        return None


def _pad(f: list, n: int) -> list:
    f = list(f) + [mpq(0)] * (n - len(f))
    return f[:n]


def _shape_functions(basis, t: str, syms) -> dict | None:
    out = {}
    for s in syms:
        cand = [g for g in basis.polys if s in g.variables and set(g.variables) <= {s, t} and g.degree(s) == 1]
        if not cand:
            return None
        g = cand[0]
        c1, c0 = g.coeff_of(s, 1), g.coeff_of(s, 0)
        if not c1.is_constant():
            return None
        k = c1.constant_value()
        dense = c0.univariate_coeffs(t) if c0.variables else [c0.constant_term()]
        out[s] = [-c / k for c in dense]
    return out


def _power_sums(P: list, count: int) -> list:
    """p_k = sum of k-th powers of the roots of P (with multiplicity), k < count."""
    n = U.degree(P)
    m = [c / P[-1] for c in P]
    ps = [mpq(n)]
    for k in range(1, count):
        s = -k * m[n - k] if k <= n else mpq(0)
        for i in range(1, min(k, n + 1)):
            s -= m[n - i] * ps[k - i]
        ps.append(s)
    return ps


def _horner_iv(cs, x: Interval) -> Interval:
    acc = Interval(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def hurwitz_census(basis, t: str, syms, max_forms: int = 12, max_rounds: int = 40) -> HurwitzCensus | None:
    """Count all complex solutions whose `syms` values are real and Hurwitz.

    `syms` are coefficient symbols a1..an of 1 + a1 s + ... + an s^n.
    Returns None when the basis is not in shape position.
    """
    elims = [g for g in basis.polys if set(g.variables) == {t}]
    if not elims:
        return None
    P = U.squarefree_part(list(elims[0].univariate_coeffs(t)))
    n = U.degree(P)
    funcs = _shape_functions(basis, t, syms)
    if funcs is None:
        log.info("census skipped: basis is not in shape position over %s", t)
        return None
    g = {s: _pad(U.rem(f, P), n) for s, f in funcs.items()}

    def mulmod(a, b):
        return _pad(U.rem(U.mul(U.trim(list(a)), U.trim(list(b))), P), n)

    # dimension of Q[g_1..g_k]: the number of distinct projection points
    span = _Echelon()
    one = _pad([mpq(1)], n)
    span.add(one)
    queue, elems = [one], [one]
    while queue:
        b = queue.pop()
        for s in syms:
            v = mulmod(b, g[s])
            if span.add(v) is None:
                elems.append(v)
                queue.append(v)
    D = span.size

    ps = _power_sums(P, n)
    for form in itertools.islice(_forms(len(syms)), max_forms):
        h = [sum((c * g[s][i] for c, s in zip(form, syms)), mpq(0)) for i in range(n)]
        kry = _Echelon()
        powers = [one]
        dep = kry.add(one)
        while True:
            nxt = mulmod(powers[-1], h)
            dep = kry.add(nxt)
            if dep is not None:
                break
            powers.append(nxt)
        d = len(powers)
        if d != D:
            continue
        # minimal polynomial m(y) = y^d - sum dep_j y^j
        m = [-dep.get(j, mpq(0)) for j in range(d)] + [mpq(1)]
        coords = {}
        for s in syms:
            w, acc = kry.reduce(g[s])
            if w:
                raise AssertionError("separating form does not generate the coefficient algebra")
            coords[s] = [acc.get(j, mpq(0)) for j in range(d)]
        traces = [sum((c * ps[i] for i, c in enumerate(p)), mpq(0)) for p in powers]
        points = []
        for iv in U.isolate_real_roots(m, "y"):
            points.append(_classify_point(iv, m, traces, coords, syms, max_rounds))
        return HurwitzCensus(n, D, points, tuple(form))
    log.warning("census: no separating form among %d candidates", max_forms)
    return None


def _forms(k: int):
    yield tuple([1] * k)
    for base in itertools.count(2):
        yield tuple(base**i for i in range(k))


def _classify_point(iv, m, traces, coords, syms, max_rounds) -> CensusPoint:
    dm = U.deriv(m)
    d = U.degree(m)
    eps = mpq(1, 2**30)
    mult = None
    for _ in range(max_rounds):
        q = U.exact_rational_root(iv)
        rho = Interval(q) if q is not None else U.refine(iv, eps).interval
        # m(y)/(y - rho) by synthetic division
        b = [Interval(0)] * d
        b[d - 1] = Interval(m[d])
        for k in range(d - 1, 0, -1):
            b[k - 1] = m[k] + rho * b[k]
        num = sum((b[j] * traces[j] for j in range(d)), Interval(0))
        den = _horner_iv(dm, rho)
        if den.contains_zero():
            eps = eps * eps
            continue
        N = num / den
        lo, hi = int(N.lo.__ceil__()), int(N.hi.__floor__())
        if lo == hi and N.width < 1:
            mult = lo
            break
        eps = eps * eps
    if mult is None:
        raise HurwitzUndecidable("could not certify the multiplicity of a projection point")
    state = {"eps": mpq(1, 2**40)}

    def values(e):
        q = U.exact_rational_root(iv)
        r = Interval(q) if q is not None else U.refine(iv, e).interval
        return {s: _horner_iv(coords[s], r) for s in syms}

    def refine_cb(rnd):
        state["eps"] = state["eps"] ** 2
        vals = values(state["eps"])
        return [Interval(1)] + [vals[s] for s in syms]

    vals = values(state["eps"])
    try:
        ok = hurwitz_stable([Interval(1)] + [vals[s] for s in syms], refine_cb, max_rounds=max_rounds)
    except HurwitzUndecidable:
        ok = None
    return CensusPoint(values(state["eps"]), mult, ok)
