"""Transfer functions N(s)/D(s) with symbolic coefficients."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq

from ..algebra.parse import parse_poly
from ..algebra.poly import MultiPoly, mono_div, mono_gcd, ONE_MONO
from ..algebra.scalars import to_scalar
from ..realsolve import univariate as U
from .mna import node_voltage
from .parse import Netlist


def _sign_of(p: MultiPoly) -> int:
    if p.is_zero():
        return 0
    return 1 if p.content_primitive()[0] > 0 else -1


@dataclass(frozen=True, eq=False)
class TransferFunction:
    num: MultiPoly
    den: MultiPoly
    var: str = "s"
    input: str = "in"
    output: str = "out"

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("transfer function with zero denominator")

    # -- normal form ----------------------------------------------------------
    def canonical(self) -> "TransferFunction":
        """Jointly primitive integer coefficients, shared monomials removed,
        sign fixed by the lowest s-coefficient of D."""
        n, d = self.num, self.den
        if n.is_zero():
            return TransferFunction(n, MultiPoly.const(1), self.var, self.input, self.output)
        g = mono_gcd(n.monomial_content(), d.monomial_content())
        if g != ONE_MONO:
            n = MultiPoly({mono_div(m, g): c for m, c in n.terms.items()}, _trusted=True)
            d = MultiPoly({mono_div(m, g): c for m, c in d.terms.items()}, _trusted=True)
        num_g, den_l = 0, 1
        for c in list(n.terms.values()) + list(d.terms.values()):
            num_g = gmpy2.gcd(num_g, c.numerator)
            den_l = gmpy2.lcm(den_l, c.denominator)
        f = mpq(den_l, num_g)
        low = next(c for c in d.collect(self.var) if not c.is_zero())
        if _sign_of(low) < 0:
            f = -f
        n, d = n * f, d * f
        if set(n.variables) | set(d.variables) <= {self.var}:
            n, d = _cancel_univariate(n, d, self.var)
        return TransferFunction(n, d, self.var, self.input, self.output)

    # -- views ----------------------------------------------------------------
    def num_coeffs(self) -> list:
        return self.num.collect(self.var)

    def den_coeffs(self) -> list:
        return self.den.collect(self.var)

    def normalized_den_coeffs(self):
        """Denominator coefficients divided by the constant term, as (num, den) pairs."""
        cs = self.den_coeffs()
        return [(c, cs[0]) for c in cs]

    def __eq__(self, other):
        if not isinstance(other, TransferFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def symbols(self) -> list:
        return sorted((set(self.num.variables) | set(self.den.variables)) - {self.var})

    def is_numeric(self) -> bool:
        return not self.symbols()

    def substitute(self, bindings: dict) -> "TransferFunction":
        b = {k: (v if isinstance(v, MultiPoly) else MultiPoly.coerce(v)) for k, v in bindings.items()}
        return TransferFunction(self.num.substitute(b), self.den.substitute(b), self.var, self.input, self.output)

    def __call__(self, x: complex) -> complex:
        nc = [float(c.constant_value()) for c in self.num_coeffs()]
        dc = [float(c.constant_value()) for c in self.den_coeffs()]
        return _horner(nc, x) / _horner(dc, x)

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "input": self.input,
            "output": self.output,
            "numerator": [str(c) for c in self.num_coeffs()],
            "denominator": [str(c) for c in self.den_coeffs()],
        }

    @classmethod
    def from_json(cls, data) -> "TransferFunction":
        if isinstance(data, str):
            data = json.loads(data)
        var = data.get("var", "s")
        n = MultiPoly.from_univariate([parse_poly(c) for c in data["numerator"]], var)
        d = MultiPoly.from_univariate([parse_poly(c) for c in data["denominator"]], var)
        return cls(n, d, var, data.get("input", "in"), data.get("output", "out"))

    def __str__(self):
        return f"({self.num}) / ({self.den})"


def _horner(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _cancel_univariate(n: MultiPoly, d: MultiPoly, var: str):
    nd = n.univariate_coeffs(var) if n.variables else [n.constant_term()]
    dd = d.univariate_coeffs(var) if d.variables else [d.constant_term()]
    g = U.gcd(nd, dd)
    if U.degree(g) <= 0:
        return n, d
    qn, _ = U.divmod_(nd, g)
    qd, _ = U.divmod_(dd, g)
    tf = TransferFunction(MultiPoly.from_univariate(qn, var), MultiPoly.from_univariate(qd, var), var)
    return tf.canonical().num, tf.canonical().den


def derive_transfer_function(net: Netlist) -> TransferFunction:
    if net.output is None:
        raise ValueError("netlist has no '.out' node")
    if net.input_source is None:
        raise ValueError("netlist has no source marked 'input'")
    N, D = node_voltage(net, net.output)
    src = next(e for e in net.elements if e.name == net.input_source)
    return TransferFunction(N, D, "s", src.name, net.output).canonical()


def substitute_values(tf: TransferFunction, bindings: dict) -> TransferFunction:
    """Exact substitution followed by integer-scaled canonical form."""
    if not bindings:
        return tf
    return tf.substitute(bindings).canonical()


def poles_zeros(tf: TransferFunction, eps=mpq(1, 10**30)):
    """Real poles and zeros (certified intervals) plus the count of complex ones.

    Returns (poles, zeros, info) where poles/zeros are lists of
    IsolatingInterval and info counts non-real roots (with multiplicity).
    """
    if not tf.is_numeric():
        raise ValueError(f"symbols {tf.symbols()} still unbound")
    out = []
    info = {}
    for label, p in (("poles", tf.den), ("zeros", tf.num)):
        dense = p.univariate_coeffs(tf.var) if p.variables else [p.constant_term()]
        dense = U.trim(dense)
        if U.degree(dense) <= 0:
            out.append([])
            info[f"complex_{label}"] = 0
            continue
        roots = [_exact_or_refined(r, eps) for r in U.isolate_real_roots(dense, tf.var)]
        real_count = sum(r.multiplicity for r in roots)
        info[f"complex_{label}"] = U.degree(dense) - real_count
        out.append(roots)
    return out[0], out[1], info


def _exact_or_refined(iv, eps):
    q = U.exact_rational_root(iv)
    if q is not None:
        return U.IsolatingInterval(q, q, iv.poly, iv.var, iv.multiplicity, iv._sqf)
    return U.refine(iv, eps)


@dataclass
class BodeRow:
    freq: float
    mag_db: float
    phase_deg: float
    flag: str = ""


def bode_samples(tf: TransferFunction, f_lo: float, f_hi: float, points_per_decade: int = 20) -> list:
    """Log-spaced samples of 20 log10 |H(j 2 pi f)| and the unwrapped phase.

    Evaluation is exact over Q(j): both parts of H are computed as rationals
    from a rational approximation of omega, then rounded once.
    """
    if not tf.is_numeric():
        raise ValueError(f"symbols {tf.symbols()} still unbound")
    nc = [c.constant_value() for c in tf.num_coeffs()]
    dc = [c.constant_value() for c in tf.den_coeffs()]
    decades = math.log10(f_hi / f_lo)
    npts = max(2, int(round(decades * points_per_decade)) + 1)
    rows = []
    prev_phase = None
    for i in range(npts):
        f = f_lo * 10 ** (decades * i / (npts - 1))
        w = mpq(2 * gmpy2.const_pi(precision=200) * gmpy2.mpfr(f, 200))
        nr, ni = _eval_jw(nc, w)
        dr, di = _eval_jw(dc, w)
        scale = sum(abs(c) * w**k for k, c in enumerate(dc)) ** 2
        if dr * dr + di * di <= scale * mpq(1, 10**24):
            rows.append(BodeRow(f, math.inf, math.nan, "pole"))
            continue
        if nr == 0 and ni == 0:
            rows.append(BodeRow(f, -math.inf, math.nan, "zero"))
            continue
        mag2 = (nr * nr + ni * ni) / (dr * dr + di * di)
        mag_db = 10 * float(gmpy2.log10(gmpy2.mpfr(mag2, 200)))
        h = complex(float(nr), float(ni)) / complex(float(dr), float(di))
        phase = math.degrees(cmath.phase(h))
        if prev_phase is not None:
            while phase - prev_phase > 180:
                phase -= 360
            while phase - prev_phase < -180:
                phase += 360
        prev_phase = phase
        rows.append(BodeRow(f, mag_db, phase))
    return rows


def _eval_jw(cs, w):
    re_, im_ = mpq(0), mpq(0)
    wp = mpq(1)
    for k, c in enumerate(cs):
        r = k % 4
        t = c * wp
        if r == 0:
            re_ += t
        elif r == 1:
            im_ += t
        elif r == 2:
            re_ -= t
        else:
            im_ -= t
        wp *= w
    return re_, im_
