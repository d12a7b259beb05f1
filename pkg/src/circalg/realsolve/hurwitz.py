"""Hurwitz stability by the Routh array, with exact or interval coefficients."""

from __future__ import annotations

import logging
from typing import Callable, Sequence

from gmpy2 import mpq

from .interval import Interval
from .univariate import gcd, degree, isolate_real_roots, refine, trim

log = logging.getLogger(__name__)


class HurwitzUndecidable(ArithmeticError):
    """Interval coefficients too wide to fix the sign of a Routh pivot."""


class _Ambiguous(Exception):
    pass


def _sign(x):
    if isinstance(x, Interval):
        s = x.sign()
        if s is None:
            raise _Ambiguous
        return s
    return (x > 0) - (x < 0)


def _routh_first_column(coeffs: list) -> list | None:
    """First column of the Routh array, or None as soon as a zero pivot shows up."""
    n = len(coeffs) - 1
    desc = list(reversed(coeffs))
    r0 = desc[0::2]
    r1 = desc[1::2]
    col = [r0[0]]
    if _sign(r0[0]) == 0:
        return None
    rows = [r0, r1]
    for _ in range(n):
        a, b = rows[-2], rows[-1]
        if not b:
            break
        if _sign(b[0]) == 0:
            return None
        col.append(b[0])
        nxt = []
        for j in range(len(a) - 1):
            bj = b[j + 1] if j + 1 < len(b) else 0
            nxt.append((b[0] * a[j + 1] - a[0] * bj) / b[0])
        rows.append(nxt)
    return col


def hurwitz_stable(
    coeffs: Sequence,
    refine_cb: Callable[[int], Sequence] | None = None,
    max_rounds: int = 30,
) -> bool:
    """True iff every root of sum(coeffs[i] s^i) has negative real part.

    Coefficients may be exact scalars or Intervals.  When a Routh pivot's sign
    is ambiguous, refine_cb(round) must return tighter coefficients; after
    max_rounds the question is declared undecidable.
    """
    coeffs = list(coeffs)
    for rnd in range(max_rounds + 1):
        try:
            return _decide(coeffs)
        except (_Ambiguous, ZeroDivisionError):
            if refine_cb is None or rnd == max_rounds:
                break
            log.debug("routh pivot ambiguous, refining (round %d)", rnd + 1)
            coeffs = list(refine_cb(rnd + 1))
    raise HurwitzUndecidable("sign of a Routh pivot undecidable at the available precision")


def _decide(coeffs: list) -> bool:
    while coeffs and not isinstance(coeffs[-1], Interval) and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return len(coeffs) == 1 and _sign(coeffs[0]) != 0
    if _sign(coeffs[0]) == 0:
        return False  # root at the origin
    col = _routh_first_column(coeffs)
    if col is None or len(col) != len(coeffs):
        return False
    signs = {_sign(c) for c in col}
    return len(signs) == 1


def hermite_biehler(coeffs: Sequence) -> bool:
    """Independent stability test from the interlacing of even and odd parts.

    p(s) = h(s^2) + s*g(s^2) is Hurwitz iff all coefficients share one sign and
    the roots of h and g are real, negative, simple and interlace with a root
    of h closest to the origin.
    """
    p = trim([mpq(c) for c in coeffs])
    n = len(p) - 1
    if n < 1:
        return n == 0
    if p[-1] < 0:
        p = [-c for c in p]
    if any(c <= 0 for c in p):
        return False
    h = p[0::2]
    g = p[1::2]
    if degree(g) > 0 and degree(h) > 0 and degree(gcd(h, g)) > 0:
        return False
    hr = isolate_real_roots(h) if degree(h) > 0 else []
    gr = isolate_real_roots(g) if degree(g) > 0 else []
    if len(hr) != degree(h) or len(gr) != degree(g):
        return False
    if any(r.multiplicity > 1 for r in hr + gr):
        return False
    tagged = _separate([(r, "h") for r in hr] + [(r, "g") for r in gr])
    # positive coefficients already rule out roots in [0, inf)
    tagged.sort(key=lambda t: -t[0].lo)
    expect = "h"
    for _, tag in tagged:
        if tag != expect:
            return False
        expect = "g" if expect == "h" else "h"
    return True


def _separate(tagged: list) -> list:
    """Refine isolating intervals of distinct roots until they are pairwise disjoint."""
    items = list(tagged)
    eps = mpq(1, 2)
    for _ in range(400):
        items.sort(key=lambda t: t[0].lo)
        clash = False
        for i in range(len(items) - 1):
            a, b = items[i][0], items[i + 1][0]
            if b.lo < a.hi or (a.exact and b.exact and a.lo == b.lo) or (b.lo == a.hi and (a.exact or b.exact)):
                clash = True
                items[i] = (refine(a, min(eps, a.width / 2) if a.width else eps), items[i][1])
                items[i + 1] = (refine(b, min(eps, b.width / 2) if b.width else eps), items[i + 1][1])
        if not clash:
            return items
        eps /= 2
    raise ArithmeticError("could not separate root intervals")
