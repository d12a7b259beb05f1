"""LC ladders in Cauer-I form: impedance, continued-fraction expansion, stagewise sizing.

A ladder is the alternating list L1, C1, L2, C2, ... of series inductors and
shunt capacitors, so that

    Z(s) = L1 s + 1/(C1 s + 1/(L2 s + ...)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from ..algebra.poly import MultiPoly, exact_div
from ..algebra.ratfunc import RationalFunction
from ..algebra.scalars import is_scalar, to_scalar
from ..netlist.tf import TransferFunction
from ..realsolve import univariate as U
from ..sizing.systems import DesignSpec, coefficient_match

S = MultiPoly.symbol("s")


class NotRealizable(ValueError):
    """The impedance is not a Cauer-I LC ladder.  `partial` holds the stages found so far."""

    def __init__(self, msg: str, partial: list | None = None):
        super().__init__(msg)
        self.partial = list(partial or [])


@dataclass(frozen=True)
class Ladder:
    values: tuple

    def __post_init__(self):
        vals = tuple(v if isinstance(v, MultiPoly) and not v.is_constant() else _as_value(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("a ladder needs at least one element")
        for i, v in enumerate(vals):
            if _is_numeric(v) and not _numeric(v) > 0:
                raise ValueError(f"{self.label(i)} = {v} is not positive")

    @classmethod
    def from_lc(cls, L, C) -> "Ladder":
        if not (len(L) == len(C) or len(L) == len(C) + 1):
            raise ValueError("need len(L) == len(C) or len(C) + 1")
        out = []
        for i, lv in enumerate(L):
            out.append(lv)
            if i < len(C):
                out.append(C[i])
        return cls(tuple(out))

    @classmethod
    def symbolic(cls, n_elements: int) -> "Ladder":
        return cls(tuple(MultiPoly.symbol(cls.label(i)) for i in range(n_elements)))

    @staticmethod
    def label(i: int) -> str:
        return f"{'L' if i % 2 == 0 else 'C'}{i // 2 + 1}"

    @property
    def L(self) -> tuple:
        return self.values[0::2]

    @property
    def C(self) -> tuple:
        return self.values[1::2]

    def is_numeric(self) -> bool:
        return all(_is_numeric(v) for v in self.values)

    def to_json(self) -> dict:
        return {self.label(i): str(_numeric(v) if _is_numeric(v) else v) for i, v in enumerate(self.values)}

    def __str__(self):
        return ", ".join(f"{self.label(i)}={_numeric(v) if _is_numeric(v) else v}" for i, v in enumerate(self.values))


def _as_value(v):
    if isinstance(v, MultiPoly):
        return v.constant_value()
    if isinstance(v, str):
        from ..netlist.parse import parse_value

        p = parse_value(v)
        return p.constant_value() if p.is_constant() else p
    return to_scalar(v)


def _is_numeric(v) -> bool:
    return is_scalar(v) or (isinstance(v, MultiPoly) and v.is_constant())


def _numeric(v):
    return v.constant_value() if isinstance(v, MultiPoly) else v


def ladder_impedance(ladder: Ladder) -> RationalFunction:
    """Evaluate the continued fraction from the last element upward."""
    acc = None
    for i in reversed(range(len(ladder.values))):
        term = RationalFunction.coerce(MultiPoly.coerce(ladder.values[i]) * S)
        acc = term if acc is None else term + acc.inverse()
    return acc


def _dense(p: MultiPoly, var: str = "s") -> list:
    if set(p.variables) - {var}:
        raise ValueError(f"coefficients must be numeric, got symbols {sorted(set(p.variables) - {var})}")
    return p.univariate_coeffs(var) if p.variables else U.trim([p.constant_term()])


def _check_lc_shape(n: list, d: list) -> None:
    dn, dd = U.degree(n), U.degree(d)
    if dd < 0:
        raise ZeroDivisionError("zero denominator")
    if dn != dd + 1:
        raise NotRealizable(f"numerator degree {dn} must exceed denominator degree {dd} by one")
    for poly, deg in ((n, dn), (d, dd)):
        if any(c != 0 for i, c in enumerate(poly) if (i - deg) % 2):
            raise NotRealizable("numerator and denominator must be odd/even polynomials")


def cauer_expand(z, var: str = "s", max_steps: int = 1000) -> Ladder:
    """Continued-fraction expansion at infinity: alternately peel L s and C s."""
    z = RationalFunction.coerce(z)
    n, d = _dense(z.num, var), _dense(z.den, var)
    _check_lc_shape(n, d)
    out = []
    while True:
        if len(out) >= max_steps:
            raise NotRealizable("expansion did not terminate", out)
        q, r = U.divmod_(n, d)
        if U.degree(q) != 1 or q[0] != 0:
            raise NotRealizable(f"quotient {q} is not a single s-term", out)
        if q[1] <= 0:
            raise NotRealizable(f"non-positive element value {q[1]}", out)
        out.append(q[1])
        r = U.trim(r)
        if U.degree(r) < 0:
            break
        if U.degree(r) != U.degree(d) - 1 or any(c != 0 for i, c in enumerate(r) if (i - U.degree(r)) % 2):
            raise NotRealizable("remainder has the wrong parity or degree", out)
        n, d = d, r
    return Ladder(tuple(out))


# -- stagewise sizing by coefficient matching ------------------------------


@dataclass
class StageSolution:
    element: str
    values: dict  # unknown -> RationalFunction
    side_conditions: list = field(default_factory=list)  # expressions assumed nonzero
    degenerate: bool = False


def solve_linear_chain(equations, unknowns) -> tuple[dict, list]:
    """Solve equations that can be ordered so each is linear in one new unknown.

    Returns (values, side_conditions).  Monomial factors in parameters are
    divided out and recorded as nonzero side conditions, as are the
    coefficients divided by.  Raises ValueError when no such ordering exists.
    """
    unknowns = list(unknowns)
    todo = [MultiPoly.coerce(e) for e in equations]
    sol: dict = {}
    side: list = []
    while todo:
        best = None
        for idx, e in enumerate(todo):
            r = RationalFunction.coerce(e).substitute(sol) if sol else RationalFunction.coerce(e)
            p = r.num
            free = [v for v in unknowns if v in p.variables and v not in sol]
            if best is None or len(free) < len(best[2]):
                best = (idx, p, free)
        idx, p, free = best
        todo.pop(idx)
        if p.is_zero():
            continue
        p = _strip_parameter_monomial(p, set(unknowns), side)
        if not free:
            raise ValueError(f"inconsistent stage equations: {p} = 0")
        if len(free) > 1:
            raise ValueError(f"equation {p} is not triangular in {free}")
        x = free[0]
        if p.degree(x) != 1:
            raise ValueError(f"equation {p} is not linear in {x}")
        c1, c0 = p.coeff_of(x, 1), p.coeff_of(x, 0)
        if not c1.is_constant():
            side.append(c1)
        sol[x] = RationalFunction(-c0, c1).normalized()
    return sol, _dedupe_conditions(side)


def _strip_parameter_monomial(p: MultiPoly, unknowns: set, side: list) -> MultiPoly:
    m = tuple((v, e) for v, e in p.monomial_content() if v not in unknowns)
    if not m:
        return p
    for v, _ in m:
        side.append(MultiPoly.symbol(v))
    return exact_div(p, MultiPoly({m: 1}))


def _dedupe_conditions(side):
    out = []
    for c in side:
        c = c.content_primitive()[1] if not c.is_constant() else c
        if c not in out and -c not in out:
            out.append(c)
    return out


def _stage_system(P: list, Q: list, element: str, prefix: str):
    """Symbolic stage F = x s + R/S matched against P/Q (lists of coefficients, ascending).

    R keeps the parity of P with degree deg P - 2, S the shape of Q.  Whichever
    of R, S is even gets constant coefficient 1, the matching normalization.
    """
    dP, dQ = len(P) - 1, len(Q) - 1
    x = MultiPoly.symbol(element)
    unknowns = [element]
    if dP - 2 < 0:
        R, Sd = MultiPoly(), MultiPoly.const(1)
        norm = "den0"
    else:
        num_even = dP % 2 == 0
        R = MultiPoly()
        for i in range(dP - 2, -1, -2):
            if i == 0 and num_even:
                R = R + 1
            else:
                name = f"{prefix}{i}"
                unknowns.append(name)
                R = R + MultiPoly.symbol(name) * S**i
        Sd = MultiPoly()
        for i in range(dQ, -1, -2):
            if i == 0 and not num_even:
                Sd = Sd + 1
            else:
                name = f"{prefix}{i}"
                unknowns.append(name)
                Sd = Sd + MultiPoly.symbol(name) * S**i
        norm = "num0" if num_even else "den0"
    tf = TransferFunction(x * S * Sd + R, Sd, "s")
    spec = DesignSpec("target", A=list(P), B=list(Q), normalization=norm)
    system = coefficient_match(tf, spec, unknowns=unknowns)
    return system, R, Sd


def ladder_sizing_step(A=None, k="k", element: str = "L1", prefix: str = "a") -> StageSolution:
    """First stage of sizing against k (A6 s^6 + A4 s^4 + A2 s^2 + 1)/(A5 s^5 + A3 s^3 + A1 s).

    `A` maps 1..6 to coefficient values; symbols A1..A6 by default.  The stage
    equation Z = L1 s + Z1, Z1 = (a4 s^4 + a2 s^2 + 1)/(a5 s^5 + a3 s^3 + a1 s),
    goes through coefficient_match and is solved in the parameter field.
    """
    A = A or {i: MultiPoly.symbol(f"A{i}") for i in range(1, 7)}
    A = {i: MultiPoly.coerce(v) for i, v in A.items()}
    kk = MultiPoly.symbol(k) if isinstance(k, str) else MultiPoly.coerce(k)
    if A[5].is_zero():
        raise ValueError("A5 = 0: the first stage is undefined")
    P = [kk, 0, kk * A[2], 0, kk * A[4], 0, kk * A[6]]
    Q = [0, A[1], 0, A[3], 0, A[5]]
    system, _, _ = _stage_system(P, Q, element, prefix)
    values, side = solve_linear_chain(system.equations, system.unknowns)
    return StageSolution(element, values, side, degenerate=values[element].is_zero())


def ladder_size(target, depth: int | None = None, var: str = "s") -> Ladder:
    """All element values of the Cauer-I ladder realizing a numeric target.

    Each stage (impedance F = L s + Z1, then admittance 1/Z1 = C s + 1/Z2, ...)
    is set up with coefficient_match and solved exactly; the remainder becomes
    the next stage's target.
    """
    z = RationalFunction.coerce(target)
    n, d = _dense(z.num, var), _dense(z.den, var)
    _check_lc_shape(n, d)
    out = []
    while True:
        if depth is not None and len(out) >= depth:
            raise NotRealizable(f"more than {depth} stages needed", out)
        element = Ladder.label(len(out))
        system, R, Sd = _stage_system(n, d, element, "r")
        values, _ = solve_linear_chain(system.equations, system.unknowns)
        x = values[element]
        xv = x.num.constant_value() / x.den.constant_value()
        if xv <= 0:
            raise NotRealizable(f"{element} = {xv} is not positive", out)
        out.append(xv)
        bind = {k: v for k, v in values.items() if k != element}
        Rn = RationalFunction.coerce(R).substitute(bind) if bind else RationalFunction.coerce(R)
        Sn = RationalFunction.coerce(Sd).substitute(bind) if bind else RationalFunction.coerce(Sd)
        if Rn.is_zero():
            break
        rem = (Rn / Sn).normalized()
        n, d = _dense(rem.den, var), _dense(rem.num, var)
        _check_lc_shape(n, d)
    ladder = Ladder(tuple(out))
    if not (ladder_impedance(ladder) == z):
        raise NotRealizable("round trip through ladder_impedance failed", out)
    return ladder
