"""Back-substitution through a zero-dimensional lex Groebner basis.

Every real root of the eliminant anchors one branch.  Along a branch the
remaining unknowns are expressed as rational functions of the anchor variable
(reduced modulo the anchor's square-free polynomial), so the only irrational
quantity is the anchor root itself and all zero tests stay exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from gmpy2 import mpq

from ..algebra.poly import MultiPoly
from ..groebner import GroebnerBasis
from .interval import Interval, certified_digits, eval_interval, mpq_to_decimal
from . import univariate as U

log = logging.getLogger(__name__)

DEFAULT_EPS = mpq(1, 10**32)


class UnsupportedShape(ValueError):
    """Back-substitution needs a nonlinear step over an irrational anchor."""


class UndecidableSign(ArithmeticError):
    pass


@dataclass(frozen=True)
class AlgebraicValue:
    """num(x)/den(x) evaluated at the anchor root x; dense ascending coefficients."""

    num: tuple
    den: tuple

    def enclose(self, x: Interval) -> Interval:
        return _horner(self.num, x) / _horner(self.den, x)

    def at(self, x):
        return U.evaluate(list(self.num), x) / U.evaluate(list(self.den), x)


def _horner(p, x: Interval) -> Interval:
    acc = Interval(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


@dataclass
class SolutionBox:
    """One real solution.  values[v] is an exact mpq, an AlgebraicValue of the
    anchor, or None when v is left free by the basis (positive-dimensional branch).
    """

    values: dict
    anchor_var: str | None = None
    anchor: U.IsolatingInterval | None = None
    anchor_poly: tuple = ()
    order: tuple = ()

    @property
    def free(self) -> list:
        return [v for v in self.order if self.values.get(v, 0) is None]

    def is_exact(self, var) -> bool:
        return isinstance(self.values[var], type(mpq(0)))

    def refine(self, eps) -> None:
        if self.anchor is not None:
            self.anchor = U.refine(self.anchor, eps)

    def enclosure(self, var, eps=DEFAULT_EPS) -> Interval:
        """Certified interval for var of width < eps (refining the anchor as needed)."""
        v = self.values[var]
        if v is None:
            raise ValueError(f"{var} is free on this branch")
        if not isinstance(v, AlgebraicValue):
            return Interval(v)
        if self.anchor.exact:
            return Interval(v.at(self.anchor.lo))
        aeps = max(mpq(eps), mpq(1, 2**20))
        for _ in range(400):
            try:
                iv = v.enclose(self.anchor.interval)
                if iv.width < eps:
                    return iv
            except ZeroDivisionError:
                pass
            aeps = min(aeps, self.anchor.width) / 2**16
            self.refine(aeps)
            if self.anchor.exact:
                return Interval(v.at(self.anchor.lo))
        raise UndecidableSign(f"could not enclose {var} to width {float(eps)}")

    def intervals(self, eps=DEFAULT_EPS) -> dict:
        return {v: self.enclosure(v, eps) for v in self.order if self.values.get(v) is not None}

    def is_zero(self, var) -> bool:
        v = self.values[var]
        if v is None:
            return False
        if not isinstance(v, AlgebraicValue):
            return v == 0
        return _vanishes(list(v.num), self)

    def sign(self, var, max_bits: int = 2000) -> int:
        """Certified sign of var; exact zero detection first, then refinement."""
        if self.is_zero(var):
            return 0
        v = self.values[var]
        if not isinstance(v, AlgebraicValue):
            return 1 if v > 0 else -1
        eps = mpq(1, 2**32)
        while eps > mpq(1, 2**max_bits):
            s = self.enclosure(var, eps).sign()
            if s in (1, -1):
                return s
            eps = eps**2 if eps > mpq(1, 2**256) else eps / 2**256
        raise UndecidableSign(f"sign of {var} undecidable")

    def point(self, eps=DEFAULT_EPS) -> dict:
        """Exact rational midpoints (free variables omitted)."""
        return {v: iv.mid for v, iv in self.intervals(eps).items()}

    def to_json(self, digits: int = 30) -> dict:
        eps = mpq(1, 10 ** (digits + 2))
        out = {}
        for v in self.order:
            val = self.values.get(v)
            if val is None:
                out[v] = {"free": True}
                continue
            iv = self.enclosure(v, eps)
            entry = {
                "decimal": mpq_to_decimal(iv.mid, digits) if iv.width == 0 else certified_digits(iv, digits),
                "lo": str(iv.lo),
                "hi": str(iv.hi),
            }
            if iv.width == 0:
                entry["exact"] = str(iv.lo)
            out[v] = entry
        return out

    def __repr__(self):
        parts = []
        for v in self.order:
            val = self.values.get(v)
            if val is None:
                parts.append(f"{v}=free")
            elif isinstance(val, AlgebraicValue):
                parts.append(f"{v}~{float(self.enclosure(v, mpq(1, 10**12)).mid):.12g}")
            else:
                parts.append(f"{v}={val}")
        return "SolutionBox(" + ", ".join(parts) + ")"


def _vanishes(c: list, box: SolutionBox) -> bool:
    """Exact test whether the dense polynomial c vanishes at the anchor root."""
    c = U.trim(c)
    if not c:
        return True
    if box.anchor is None:
        return False
    if box.anchor.exact:
        return U.evaluate(c, box.anchor.lo) == 0
    g = U.gcd(c, list(box.anchor_poly))
    if U.degree(g) <= 0:
        return False
    return U.SturmSequence.of(g).count(box.anchor.lo, box.anchor.hi) > 0


def _mod(p: list, f: list) -> list:
    if U.degree(f) <= 0:
        return U.trim(p)
    return U.rem(p, f) if len(p) >= len(f) else U.trim(p)


def _specialize(g: MultiPoly, var: str, box: SolutionBox) -> list:
    """Coefficients of g in var (ascending), each a dense poly in the anchor."""
    f = list(box.anchor_poly)
    used = [w for w in g.variables if w != var]
    maxdeg = {w: g.degree(w) for w in used}
    # common denominator prod den_w^maxdeg_w
    coeffs: dict = {}
    for m, c in g.terms.items():
        e_var = 0
        term = [mpq(c)]
        for w, e in m:
            if w == var:
                e_var = e
                continue
            val = box.values[w]
            if isinstance(val, AlgebraicValue):
                num, den = list(val.num), list(val.den)
            else:
                num, den = [val], [mpq(1)]
            for _ in range(e):
                term = _mod(U.mul(term, num), f)
            for _ in range(maxdeg[w] - e):
                term = _mod(U.mul(term, den), f)
        for w in used:
            if all(w != x for x, _ in m):
                val = box.values[w]
                den = list(val.den) if isinstance(val, AlgebraicValue) else [mpq(1)]
                for _ in range(maxdeg[w]):
                    term = _mod(U.mul(term, den), f)
        coeffs[e_var] = U.add(coeffs.get(e_var, []), term)
    top = max(coeffs) if coeffs else 0
    return [coeffs.get(i, []) for i in range(top + 1)]


def solve_triangular(gb: GroebnerBasis, eliminant_var: str, unknowns=None) -> list:
    """All real solutions of a zero-dimensional lex basis, one box per branch.

    Branches where the basis leaves a variable unconstrained keep it as free.
    """
    order = tuple(unknowns) if unknowns is not None else tuple(gb.order.priority)
    present = set()
    for g in gb.polys:
        present.update(g.variables)
    order = tuple(v for v in order if v in present or v == eliminant_var)
    if order[-1] != eliminant_var:
        raise ValueError(f"{eliminant_var} must be the lowest variable of the lex order")
    elim = [g for g in gb.polys if set(g.variables) == {eliminant_var}]
    if not elim:
        raise ValueError(f"no univariate element in {eliminant_var}: not zero-dimensional")
    P = U.trim(list(elim[0].univariate_coeffs(eliminant_var)))
    sqf = U.squarefree_part(P)
    boxes = []
    for iv in U.isolate_real_roots(sqf, eliminant_var):
        box = SolutionBox({eliminant_var: None}, eliminant_var, iv, tuple(sqf), order)
        q = U.exact_rational_root(iv)
        if q is not None:
            box = SolutionBox({eliminant_var: q}, None, None, (), order)
        else:
            box.values[eliminant_var] = AlgebraicValue((mpq(0), mpq(1)), (mpq(1),))
        boxes.extend(_extend(gb, list(reversed(order[:-1])), box))
    return boxes


def _extend(gb: GroebnerBasis, todo: list, box: SolutionBox) -> list:
    if not todo:
        return [box]
    var, rest = todo[0], todo[1:]
    solved = {v for v in box.values}
    cands = [g for g in gb.polys if var in g.variables and set(g.variables) <= solved | {var}]
    specs = []
    for g in cands:
        cs = _specialize(g, var, box)
        eff = max((i for i, c in enumerate(cs) if not _vanishes(c, box)), default=-1)
        if eff == 0:
            log.debug("branch inconsistent at %s", var)
            return []
        if eff > 0:
            specs.append((eff, cs[: eff + 1]))
    if not specs:
        nb = _clone(box)
        nb.values[var] = None
        return _extend(gb, rest, nb)
    specs.sort(key=lambda t: t[0])
    eff, cs = specs[0]
    if eff == 1:
        f = list(box.anchor_poly)
        nb = _clone(box)
        if box.anchor is None:
            nb.values[var] = mpq(-_const(cs[0]) / _const(cs[1]))
        else:
            num = _mod([-c for c in cs[0]], f)
            den = _mod(cs[1], f)
            if _vanishes(num, box):
                nb.values[var] = mpq(0)
            elif U.degree(num) <= 0 and U.degree(den) <= 0:
                nb.values[var] = mpq(num[0] / den[0])
            else:
                nb.values[var] = AlgebraicValue(tuple(num), tuple(den))
        return _extend(gb, rest, nb)
    if box.anchor is not None:
        raise UnsupportedShape(
            f"{var} enters every remaining basis element nonlinearly over an irrational root"
        )
    # rational branch: the gcd of all specialized polynomials carries var's values
    polys = [[_const(c) for c in cs] for _, cs in specs]
    g = polys[0]
    for p in polys[1:]:
        g = U.gcd(g, p)
    out = []
    if U.degree(g) <= 0:
        return []
    sqf = U.squarefree_part(g)
    for iv in U.isolate_real_roots(sqf, var):
        nb = _clone(box)
        q = U.exact_rational_root(iv)
        if q is not None:
            nb.values[var] = q
        else:
            nb.anchor_var, nb.anchor, nb.anchor_poly = var, iv, tuple(sqf)
            nb.values[var] = AlgebraicValue((mpq(0), mpq(1)), (mpq(1),))
        out.extend(_extend(gb, rest, nb))
    return out


def _const(c: list):
    c = U.trim(c)
    return c[0] if c else mpq(0)


def _clone(box: SolutionBox) -> SolutionBox:
    return SolutionBox(dict(box.values), box.anchor_var, box.anchor, box.anchor_poly, box.order)


def certify_residuals(box: SolutionBox, equations, eps=DEFAULT_EPS):
    """Interval residuals of the original equations over the box.

    Returns the widest |residual| bound, or raises if some residual interval
    excludes zero.  Branches with free variables are checked symbolically:
    after substituting the exact values every equation must vanish identically.
    """
    free = box.free
    if free:
        exact = {v: box.values[v] for v in box.order if box.values.get(v) is not None}
        if not all(box.is_exact(v) for v in exact):
            return None
        for eq in equations:
            r = eq.substitute({v: MultiPoly.const(x) for v, x in exact.items()})
            if not r.is_zero():
                raise ArithmeticError(f"residual {r} does not vanish on the free branch")
        return mpq(0)
    env = box.intervals(eps)
    worst = mpq(0)
    for eq in equations:
        r = eval_interval(eq, env)
        if not r.contains_zero():
            raise ArithmeticError(f"residual interval {r} excludes zero")
        worst = max(worst, abs(r.lo), abs(r.hi))
    return worst


def positivity_filter(boxes, vars_) -> list:
    """Boxes on which every named variable is certified strictly positive."""
    keep = []
    for b in boxes:
        if all(b.values.get(v) is not None and b.sign(v) > 0 for v in vars_):
            keep.append(b)
    return keep
