"""From a transfer function and a target to a polynomial design system."""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from ..algebra.parse import parse_poly
from ..algebra.poly import MultiPoly, exact_div
from ..netlist.tf import TransferFunction


@dataclass
class DesignSpec:
    """What the circuit should do.

    mode: "target" (match A/B coefficient lists), "butterworth", "chebyshev"
    or "pole_placement".  For pole placement `poles` lists the new poles
    (scalars or symbols) and `zero_structure` the s-polynomial kept as the
    numerator's fixed part ("auto" extracts it from the numerator).
    """

    mode: str
    order: int = 0
    A: list = field(default_factory=list)
    B: list = field(default_factory=list)
    poles: list = field(default_factory=list)
    zero_structure: object = "auto"
    scale_symbol: str = "k"
    coeff_prefix: str = "a"
    normalization: str = "den0"
    linearize_top: bool = True

    def __post_init__(self):
        if self.mode not in ("target", "butterworth", "chebyshev", "chebyshev_literal", "pole_placement"):
            raise ValueError(f"unknown design mode {self.mode!r}")
        if self.mode in ("butterworth", "chebyshev", "chebyshev_literal") and self.order < 1:
            raise ValueError("filter order must be at least 1")
        if self.mode == "pole_placement" and not self.poles:
            raise ValueError("pole placement needs at least one pole")


@dataclass
class DesignSystem:
    equations: list
    unknowns: list
    frozen: dict = field(default_factory=dict)
    parameters: list = field(default_factory=list)
    hurwitz_symbols: list = field(default_factory=list)

    def __post_init__(self):
        allowed = set(self.unknowns) | set(self.parameters) | set(self.frozen)
        for eq in self.equations:
            extra = set(eq.variables) - allowed
            if extra:
                raise ValueError(f"equation {eq} uses undeclared symbols {sorted(extra)}")

    def to_text(self) -> str:
        head = "# unknowns: " + " ".join(self.unknowns)
        if self.parameters:
            head += "\n# parameters: " + " ".join(self.parameters)
        return head + "\n" + "\n".join(str(e) for e in self.equations) + "\n"


def chebyshev_poly(n: int, var: str = "x") -> MultiPoly:
    if n < 0:
        raise ValueError("Chebyshev degree must be non-negative")
    x = MultiPoly.symbol(var)
    t0, t1 = MultiPoly.const(1), x
    if n == 0:
        return t0
    for _ in range(n - 1):
        t0, t1 = t1, 2 * x * t1 - t0
    return t1


def _mirror(p: MultiPoly, var: str) -> MultiPoly:
    return p.substitute({var: -MultiPoly.symbol(var)})


def _even_in_w_to_s(p: MultiPoly, w: str, s: str) -> MultiPoly:
    """Rewrite an even polynomial in w through w^2 = -s^2 (that is, s = j w)."""
    out = MultiPoly()
    S = MultiPoly.symbol(s)
    for i, c in enumerate(p.collect(w)):
        if c.is_zero():
            continue
        if i % 2:
            raise ValueError("magnitude-squared polynomial must be even")
        out = out + c * ((-1) ** (i // 2)) * S ** i
    return out


def feldtkeller_rhs(n: int, family: str, var: str = "s") -> MultiPoly:
    """D(s)D(-s) target, 1 + K(w)^2 at w^2 = -s^2, scaled to constant term 1.

    "chebyshev_literal" is 1 + T_n(s) T_n(-s) taken verbatim in s, without
    the substitution or the scaling.
    """
    if family == "chebyshev_literal":
        t = chebyshev_poly(n, var)
        return 1 + t * _mirror(t, var)
    w = "w__"
    if family == "butterworth":
        char2 = MultiPoly.symbol(w) ** (2 * n)
    elif family == "chebyshev":
        char2 = chebyshev_poly(n, w) ** 2
    else:
        raise ValueError(f"unknown filter family {family!r}")
    rhs = _even_in_w_to_s(1 + char2, w, var)
    return rhs / rhs.constant_term()


def feldtkeller_system(symbols, family: str, var: str = "s", linearize_top: bool = True) -> list:
    """Equations matching D(s)D(-s) against the family's right-hand side.

    D = 1 + a1 s + ... + an s^n with the given coefficient symbols.  One
    equation per even power s^2 .. s^2n.  With linearize_top the last one,
    a_n^2 = c, becomes a_n = sqrt(c) whenever c is a rational square: a
    Hurwitz polynomial with constant term 1 has a positive leading coefficient.
    """
    syms = [MultiPoly.symbol(a) if isinstance(a, str) else a for a in symbols]
    n = len(syms)
    s = MultiPoly.symbol(var)
    D = MultiPoly.const(1)
    for i, a in enumerate(syms, start=1):
        D = D + a * s**i
    prod = (D * _mirror(D, var)).collect(var)
    rhs = feldtkeller_rhs(n, family, var).collect(var)
    eqs = []
    for i in range(2, 2 * n + 1, 2):
        lhs = prod[i] if i < len(prod) else MultiPoly()
        r = rhs[i] if i < len(rhs) else MultiPoly()
        eqs.append(lhs - r)
    if linearize_top:
        c = (-1) ** n * rhs[2 * n].constant_value()
        if c > 0:
            rn = gmpy2.isqrt(c.numerator)
            rd = gmpy2.isqrt(c.denominator)
            if rn * rn == c.numerator and rd * rd == c.denominator:
                eqs[-1] = syms[-1] - mpq(rn, rd)
    return eqs


def _content_normalize(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    return p.content_primitive()[1]


def coefficient_match(tf: TransferFunction, spec: DesignSpec, frozen: dict | None = None,
                      unknowns: list | None = None) -> DesignSystem:
    """Cross-multiplied coefficient equations between tf and the target.

    target mode: N_i * ref_t - A_i * ref_tf (and D_i * ref_t - B_i * ref_tf),
    the references being the constant denominator coefficients ("den0") or
    the constant numerator coefficients ("num0").

    butterworth/chebyshev: the normalized denominator coefficients become new
    unknowns a_i with D_i - a_i D_0 = 0, joined with the Feldtkeller equations.
    """
    frozen = dict(frozen or {})
    fb = {k: MultiPoly.coerce(v) if not isinstance(v, MultiPoly) else v for k, v in frozen.items()}
    tf = tf.substitute(fb) if fb else tf
    N, D = tf.num_coeffs(), tf.den_coeffs()
    syms = tf.symbols()
    if spec.mode == "target":
        A = [MultiPoly.coerce(a) for a in spec.A]
        B = [MultiPoly.coerce(b) for b in spec.B]
        if len(A) > len(N) or len(B) > len(D):
            raise ValueError("target degree exceeds the circuit's degree")
        if spec.normalization == "den0":
            ref_tf, ref_t = D[0], B[0]
        elif spec.normalization == "num0":
            ref_tf, ref_t = N[0], A[0]
        else:
            raise ValueError(f"unknown normalization {spec.normalization!r}")
        if ref_tf.is_zero() or ref_t.is_zero():
            raise ValueError("normalizing coefficient is zero")
        eqs = []
        for X, T in ((N, A), (D, B)):
            for i in range(max(len(X), len(T))):
                xi = X[i] if i < len(X) else MultiPoly()
                ti = T[i] if i < len(T) else MultiPoly()
                eq = xi * ref_t - ti * ref_tf
                if not eq.is_zero():
                    eqs.append(_content_normalize(eq))
        unk = list(unknowns or syms)
        params = sorted({v for e in eqs for v in e.variables} - set(unk) - set(frozen))
        return DesignSystem(_dedupe(eqs), unk, frozen, params)
    if spec.mode in ("butterworth", "chebyshev", "chebyshev_literal"):
        n = len(D) - 1
        if spec.order and spec.order != n:
            raise ValueError(f"circuit has order {n}, spec asks for {spec.order}")
        names = [f"{spec.coeff_prefix}{i}" for i in range(1, n + 1)]
        eqs = []
        for i, a in enumerate(names, start=1):
            eqs.append(D[i] - MultiPoly.symbol(a) * D[0])
        eqs += feldtkeller_system(names, spec.mode, tf.var, spec.linearize_top)
        unk = unknowns or (names + syms)
        return DesignSystem(eqs, list(unk), frozen, hurwitz_symbols=names)
    raise ValueError("use pole_placement_system for pole placement")


def _dedupe(eqs):
    out = []
    for e in eqs:
        if e not in out and -e not in out:
            out.append(e)
    return out


def _zero_structure(N: MultiPoly, var: str) -> MultiPoly:
    """Largest s-only polynomial Z with N = c(params) * Z(s)."""
    cs = N.collect(var)
    lead = next(c for c in reversed(cs) if not c.is_zero())
    coeffs = []
    for c in cs:
        if c.is_zero():
            coeffs.append(0)
            continue
        try:
            q = exact_div(c, lead)
        except ArithmeticError:
            raise ValueError("numerator does not split as parameters times a fixed s-polynomial") from None
        if not q.is_constant():
            raise ValueError("numerator does not split as parameters times a fixed s-polynomial")
        coeffs.append(q.constant_value())
    return MultiPoly.from_univariate(coeffs, var).content_primitive()[1]


def pole_placement_system(tf: TransferFunction, poles, zero_structure="auto", scale_symbol: str = "k",
                          unknowns=None, parameters=None) -> DesignSystem:
    """k * D(s) - N_red * prod(s - p_i), one equation per power of s.

    N_red = N / Z where Z is the zero structure to keep.  The target transfer
    function is k * Z(s) / prod(s - p_i).
    """
    var = tf.var
    s = MultiPoly.symbol(var)
    if isinstance(zero_structure, str) and zero_structure == "auto":
        Z = _zero_structure(tf.num, var)
    else:
        Z = MultiPoly.coerce(zero_structure)
    try:
        N_red = exact_div(tf.num, Z)
    except ArithmeticError:
        raise ValueError("zero structure is inconsistent with the numerator") from None
    if var in N_red.variables:
        raise ValueError("zero structure does not account for every numerator root")
    k = MultiPoly.symbol(scale_symbol)
    prod = MultiPoly.const(1)
    pole_syms = []
    for p in poles:
        pp = parse_poly(p) if isinstance(p, str) else MultiPoly.coerce(p)
        pole_syms += [v for v in pp.variables if v not in pole_syms]
        prod = prod * (s - pp)
    ident = k * tf.den - N_red * prod
    eqs = [c for c in ident.collect(var) if not c.is_zero()]
    params = list(parameters) if parameters is not None else pole_syms
    unk = list(unknowns) if unknowns is not None else [scale_symbol] + [v for v in tf.symbols() if v not in params]
    return DesignSystem(eqs, unk, {}, params)
