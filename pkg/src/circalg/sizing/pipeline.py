"""Full sizing pipeline: lex basis, eliminant, real roots, back-substitution, filters."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from gmpy2 import mpq

from ..algebra.parse import parse_poly
from ..algebra.poly import MonomialOrder, MultiPoly
from ..algebra.scalars import parse_scalar
from ..groebner import Budget, GroebnerBasis, PolySystem, buchberger, fglm, is_zero_dimensional
from ..netlist.parse import parse_netlist
from ..netlist.tf import derive_transfer_function, substitute_values
from ..realsolve.hurwitz import HurwitzUndecidable, hurwitz_stable
from ..realsolve.interval import Interval
from ..realsolve.triangular import SolutionBox, UndecidableSign, certify_residuals, solve_triangular
from ..realsolve import univariate as U
from .census import hurwitz_census
from .systems import DesignSpec, DesignSystem, coefficient_match, pole_placement_system

log = logging.getLogger(__name__)

REASONS = ("non_hurwitz", "non_positive", "trivial_zero", "negative_element")


class PositiveDimensional(ValueError):
    pass


@dataclass
class AdmissibleSolution:
    box: SolutionBox
    hurwitz_ok: bool | None = None
    positive_ok: bool | None = None
    residual: object = None
    reasons: list = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return not self.reasons and self.hurwitz_ok is not False and self.positive_ok is not False

    def to_json(self, digits: int = 30) -> dict:
        return {
            "values": self.box.to_json(digits),
            "hurwitz_ok": self.hurwitz_ok,
            "positive_ok": self.positive_ok,
            "residual_bound": None if self.residual is None else float(self.residual),
            "reasons": list(self.reasons),
        }


@dataclass
class DesignResult:
    system: DesignSystem
    basis: GroebnerBasis
    eliminant: MultiPoly
    eliminant_var: str
    admissible: list
    rejected: list
    undetermined: list
    real_root_count: int
    timing: dict
    census: object = None  # HurwitzCensus over all complex solutions, when available

    @property
    def solutions(self) -> list:
        return self.admissible + self.rejected + self.undetermined

    def to_json(self, digits: int = 30, meta: bool = True) -> dict:
        out = {
            "unknowns": self.system.unknowns,
            "basis_size": len(self.basis.polys),
            "eliminant_var": self.eliminant_var,
            "eliminant_degree": self.eliminant.degree(self.eliminant_var),
            "eliminant": str(self.eliminant),
            "eliminant_real_roots": self.real_root_count,
            "counts": {
                "solutions": len(self.solutions),
                "admissible": len(self.admissible),
                "rejected": len(self.rejected),
                "undetermined": len(self.undetermined),
            },
            "hurwitz_ok_real": sum(1 for a in self.solutions if a.hurwitz_ok),
            "admissible": [a.to_json(digits) for a in self.admissible],
            "rejected": [a.to_json(digits) for a in self.rejected],
            "undetermined": [a.to_json(digits) for a in self.undetermined],
        }
        if self.census is not None:
            out["hurwitz_census"] = self.census.to_json(min(digits, 15))
        if meta:
            out["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out


@dataclass
class SolveOptions:
    positive: list = field(default_factory=list)
    nonnegative: list = field(default_factory=list)
    hurwitz: list | None = None  # coefficient symbols a1..an, constant term 1
    budget: Budget = field(default_factory=Budget.from_env)
    eps: object = mpq(1, 10**32)
    nonzero: list = field(default_factory=list)  # zero here means a trivial solution
    lex_strategy: str = "direct"  # "fglm": grevlex basis, then order change; "fglm_modular": same, mod primes
    census: bool = True  # count complex solutions with real Hurwitz coefficients

    def __post_init__(self):
        if self.lex_strategy not in ("direct", "fglm", "fglm_modular"):
            raise ValueError(f"unknown lex strategy {self.lex_strategy!r}")


def _hurwitz_check(box: SolutionBox, syms: list) -> bool:
    def coeffs(eps):
        return [Interval(1)] + [box.enclosure(a, eps) for a in syms]

    eps0 = mpq(1, 2**40)

    def refine_cb(rnd):
        return coeffs(eps0 / mpq(2) ** (40 * rnd))

    return hurwitz_stable(coeffs(eps0), refine_cb, max_rounds=25)


def solve_design(system: DesignSystem, options: SolveOptions | None = None, basis: GroebnerBasis | None = None) -> DesignResult:
    """Lex basis -> eliminant -> certified roots -> boxes -> residuals -> filters."""
    opts = options or SolveOptions()
    t0 = time.perf_counter()
    equations = [e.substitute({k: MultiPoly.coerce(v) for k, v in system.frozen.items()}) for e in system.equations]
    equations = [e for e in equations if not e.is_zero()]
    if system.parameters:
        raise ValueError(f"parameters {system.parameters} must be bound before solving")
    order = MonomialOrder("lex", tuple(system.unknowns))
    if basis is None:
        psys = PolySystem(equations, tuple(system.unknowns), ())
        if opts.lex_strategy.startswith("fglm"):
            grev = buchberger(psys, MonomialOrder("grevlex", tuple(system.unknowns)), opts.budget)
            if not is_zero_dimensional(grev, system.unknowns):
                raise PositiveDimensional(
                    "the order change needs finitely many solutions; freeze more symbols "
                    f"(candidates: {', '.join(system.unknowns)})"
                )
            method = "modular" if opts.lex_strategy == "fglm_modular" else "rational"
            basis = fglm(grev, order, opts.budget, method=method)
        else:
            basis = buchberger(psys, order, opts.budget)
    t1 = time.perf_counter()
    elim_var = system.unknowns[-1]
    elims = [g for g in basis.polys if set(g.variables) == {elim_var}]
    if basis.polys == [MultiPoly.const(1)] or any(g.is_constant() for g in basis.polys):
        raise ValueError("the design equations are inconsistent (unit ideal)")
    if not elims:
        raise PositiveDimensional(
            f"no univariate polynomial in {elim_var}: the system has infinitely many solutions; "
            f"freeze more symbols (candidates: {', '.join(system.unknowns)})"
        )
    P = elims[0]
    boxes = solve_triangular(basis, elim_var, system.unknowns)
    nroots = len(U.isolate_real_roots(U.squarefree_part(list(P.univariate_coeffs(elim_var))), elim_var))
    t2 = time.perf_counter()
    admissible, rejected, undetermined = [], [], []
    hz = opts.hurwitz if opts.hurwitz is not None else system.hurwitz_symbols
    for box in boxes:
        sol = AdmissibleSolution(box)
        try:
            sol.residual = certify_residuals(box, equations, opts.eps)
            _classify(sol, opts, hz)
        except (UndecidableSign, HurwitzUndecidable) as exc:
            log.warning("undetermined solution: %s", exc)
            sol.reasons.append("undetermined")
            undetermined.append(sol)
            continue
        (admissible if sol.admissible else rejected).append(sol)
    t3 = time.perf_counter()
    census = None
    if hz and opts.census:
        census = hurwitz_census(basis, elim_var, hz)
    t4 = time.perf_counter()
    timing = {"groebner": t1 - t0, "roots": t2 - t1, "filters": t3 - t2, "census": t4 - t3, "total": t4 - t0}
    return DesignResult(system, basis, P, elim_var, admissible, rejected, undetermined, nroots, timing, census)


def _classify(sol: AdmissibleSolution, opts: SolveOptions, hz: list) -> None:
    box = sol.box
    if box.free or any(box.values.get(v) is not None and box.is_zero(v) for v in opts.nonzero):
        sol.reasons.append("trivial_zero")
        sol.positive_ok = False
        return
    if hz:
        sol.hurwitz_ok = _hurwitz_check(box, hz)
        if not sol.hurwitz_ok:
            sol.reasons.append("non_hurwitz")
    signs = {v: box.sign(v) for v in opts.positive + opts.nonnegative}
    negative = [v for v, sg in signs.items() if sg < 0]
    zero = [v for v in opts.positive if signs[v] == 0]
    sol.positive_ok = not negative and not zero
    if negative:
        sol.reasons.append("negative_element")
    elif zero:
        sol.reasons.append("non_positive")


# -- JSON design specs -----------------------------------------------------


def _scalar_map(d: dict) -> dict:
    return {k: parse_scalar(str(v)) if _is_number(v) else parse_poly(str(v)) for k, v in d.items()}


def _is_number(v) -> bool:
    try:
        parse_scalar(str(v))
        return True
    except (ValueError, ZeroDivisionError):
        return False


def load_design(path, base: Path | None = None):
    """Read a JSON design spec; returns (DesignSystem, SolveOptions, spec dict)."""
    path = Path(path)
    data = json.loads(path.read_text())
    base = base or path.parent
    from ..netlist.parse import parse_value

    net_path = (base / data["netlist"]).resolve()
    net = parse_netlist(net_path.read_text())
    tf = derive_transfer_function(net)
    subst = {k: parse_value(str(v)) for k, v in data.get("substitute", {}).items()}
    if subst:
        tf = substitute_values(tf, subst)
    frozen = {k: parse_value(str(v)) for k, v in data.get("frozen", {}).items()}
    mode = data["mode"]
    unknowns = data.get("unknowns")
    if mode == "pole_placement":
        poles = [str(p) for p in data["poles"]]
        system = pole_placement_system(
            tf.substitute(frozen) if frozen else tf,
            poles,
            data.get("zero_structure", "auto"),
            data.get("scale_symbol", "k"),
            unknowns=unknowns,
        )
    else:
        spec = DesignSpec(mode, data.get("order", 0), data.get("A", []), data.get("B", []))
        system = coefficient_match(tf, spec, frozen, unknowns)
    opts = SolveOptions(
        positive=data.get("positive", []),
        nonnegative=data.get("nonnegative", []),
        hurwitz=data.get("hurwitz"),
        nonzero=data.get("nonzero", []),
        lex_strategy=data.get("lex_strategy", "direct"),
    )
    return system, opts, data
