"""Command-line entry point: analyze, size, ladder, reduce, bode, groebner.

Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from gmpy2 import mpq

from .algebra.parse import PolySyntaxError, parse_poly
from .algebra.poly import MonomialOrder
from .algebra.ratfunc import RationalFunction, parse_rational
from .groebner import Budget, GroebnerBudgetExceeded, PolySystem, buchberger, certify, is_zero_dimensional
from .netlist.mna import SingularCircuit
from .netlist.parse import NetlistError, parse_netlist, parse_value
from .netlist.tf import TransferFunction, bode_samples, derive_transfer_function, poles_zeros, substitute_values
from .realsolve.interval import certified_digits
from .sizing.pipeline import PositiveDimensional, load_design, solve_design
from .synthesis.ladder import Ladder, NotRealizable, cauer_expand, ladder_impedance, ladder_size, ladder_sizing_step
from .synthesis.reduce import parse_network, reduce_network

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4
log = logging.getLogger("circalg")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    digits: int = 30
    budget: Budget = field(default_factory=Budget.from_env)
    out: str | None = None
    fmt: str = "json"
    meta: bool = True

    def __post_init__(self):
        if self.digits < 6:
            raise InputError("--digits must be at least 6")
        if self.budget.max_pairs <= 0 or self.budget.max_coeff_bits <= 0:
            raise InputError("budgets must be positive")
        if self.budget.max_seconds is not None and self.budget.max_seconds <= 0:
            raise InputError("budgets must be positive")
        if self.fmt not in ("json", "text", "csv"):
            raise InputError(f"unknown format {self.fmt!r}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _substitutions(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--subst expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_value(v.strip())
    return out


def _emit(cfg: RunConfig, payload, text: str | None = None) -> None:
    if cfg.fmt == "json":
        body = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    elif cfg.fmt == "csv":
        body = payload if isinstance(payload, str) else json.dumps(payload) + "\n"
    else:
        body = text if text is not None else json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(body)
    else:
        sys.stdout.write(body)


# -- commands -----------------------------------------------------------------


def _tf_from_netlist(path: str, subst: dict) -> TransferFunction:
    net = parse_netlist(_read(path))
    tf = derive_transfer_function(net)
    return substitute_values(tf, subst) if subst else tf


def cmd_analyze(cfg: RunConfig, args) -> int:
    tf = _tf_from_netlist(args.netlist, _substitutions(args.subst))
    payload = {"transfer_function": tf.to_json()}
    D = tf.den_coeffs()
    if not D[0].is_zero():
        payload["normalized_denominator"] = [str(RationalFunction(c, D[0]).normalized()) for c in D]
    if tf.is_numeric():
        poles, zeros, info = poles_zeros(tf, mpq(1, 10 ** (cfg.digits + 2)))
        payload["poles"] = [certified_digits(r.interval, cfg.digits) for r in poles]
        payload["zeros"] = [certified_digits(r.interval, cfg.digits) for r in zeros]
        payload.update(info)
    text = f"N(s) = {tf.num}\nD(s) = {tf.den}\n"
    if "poles" in payload:
        text += f"poles: {', '.join(payload['poles'])}\nzeros: {', '.join(payload['zeros'])}\n"
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_size(cfg: RunConfig, args) -> int:
    try:
        system, opts, data = load_design(args.spec)
    except (KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"bad design spec: {exc}") from None
    opts = replace(opts, budget=cfg.budget)
    result = solve_design(system, opts)
    payload = result.to_json(cfg.digits, cfg.meta)
    lines = [
        f"basis: {payload['basis_size']} polynomials, eliminant degree {payload['eliminant_degree']} in {result.eliminant_var}",
        f"real roots: {result.real_root_count}; solutions: {len(result.solutions)}; "
        f"admissible: {len(result.admissible)}; rejected: {len(result.rejected)}; undetermined: {len(result.undetermined)}",
    ]
    if result.census is not None:
        c = result.census
        lines.append(
            f"over C: {c.solutions} solutions, {c.hurwitz_solutions} with real Hurwitz coefficients "
            f"({sum(1 for a in result.solutions if a.hurwitz_ok)} of them real)"
        )
    for tag, group in (("admissible", result.admissible), ("rejected", result.rejected)):
        for sol in group:
            vals = sol.box.to_json(min(cfg.digits, 12))
            shown = ", ".join(f"{k}={v.get('decimal', 'free')}" for k, v in vals.items())
            why = f" [{', '.join(sol.reasons)}]" if sol.reasons else ""
            lines.append(f"{tag}: {shown}{why}")
    _emit(cfg, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ladder(cfg: RunConfig, args) -> int:
    if args.sub == "impedance":
        values = [parse_value(v.strip()) for v in args.values.split(",") if v.strip()]
        z = ladder_impedance(Ladder(tuple(values)))
        _emit(cfg, {"numerator": str(z.num), "denominator": str(z.den)}, f"Z(s) = {z}\n")
    elif args.sub == "expand":
        lad = cauer_expand(parse_rational(args.expr))
        _emit(cfg, {"ladder": lad.to_json()}, str(lad) + "\n")
    else:
        if args.target:
            target = parse_rational(args.target)
            lad = ladder_size(target)
            check = cauer_expand(target)
            payload = {"ladder": lad.to_json(), "matches_cauer_expand": lad == check}
            _emit(cfg, payload, f"{lad}\nmatches continued-fraction expansion: {lad == check}\n")
        else:
            st = ladder_sizing_step()
            payload = {
                "stage": st.element,
                "formulas": {k: str(v) for k, v in st.values.items()},
                "nonzero": [str(c) for c in st.side_conditions],
            }
            text = "".join(f"{k} = {v}\n" for k, v in st.values.items())
            text += "assuming " + ", ".join(f"{c} != 0" for c in st.side_conditions) + "\n"
            _emit(cfg, payload, text)
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, args) -> int:
    net = parse_network(_read(args.network))
    strategy = "series_parallel" if args.no_delta_wye else "delta_wye"
    trace = reduce_network(net, strategy, args.max_transforms, check=args.check)
    payload = trace.to_json()
    if trace.final is not None:
        payload["matches_mna"] = bool(trace.final == net.impedance_mna()) if args.check else None
    lines = []
    for st in trace.steps:
        eqs = "; ".join(f"{a} = {b}" for a, b in st.equations) or ", ".join(st.removed)
        lines.append(f"{st.kind:15s} {eqs}")
    lines.append(f"Z = {trace.final}" if trace.final is not None else "irreducible remainder: "
                 + ", ".join(f"{e.name}({e.a},{e.b})" for e in trace.remainder.edges))
    _emit(cfg, payload, "\n".join(lines) + "\n")
    return EXIT_OK if not trace.irreducible else EXIT_INPUT


def _load_tf(path: str, subst: dict) -> TransferFunction:
    if path.endswith(".cir"):
        return _tf_from_netlist(path, subst)
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None
    tf = TransferFunction.from_json(data.get("transfer_function", data))
    return substitute_values(tf, subst) if subst else tf


def cmd_bode(cfg: RunConfig, args) -> int:
    tf = _load_tf(args.tf, _substitutions(args.subst))
    if not 0 < args.f_lo < args.f_hi:
        raise InputError("need 0 < f_lo < f_hi")
    rows = bode_samples(tf, args.f_lo, args.f_hi, args.ppd)
    if cfg.fmt == "json":
        _emit(cfg, [row.__dict__ for row in rows])
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["freq_hz", "mag_db", "phase_deg", "flag"])
    for r in rows:
        w.writerow([f"{r.freq:.9g}", f"{r.mag_db:.9g}", f"{r.phase_deg:.9g}", r.flag])
    cfg = replace(cfg, fmt="csv")
    _emit(cfg, buf.getvalue())
    return EXIT_OK


def read_system(text: str):
    """Polynomials one per line; '# unknowns:' and '# parameters:' headers give the lex priority."""
    unknowns, params, polys = None, [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            for key in ("unknowns:", "parameters:"):
                if body.startswith(key):
                    names = body[len(key):].replace(",", " ").split()
                    if key == "unknowns:":
                        unknowns = names
                    else:
                        params = names
            continue
        try:
            polys.append(parse_poly(line))
        except PolySyntaxError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if unknowns is None:
        vs = sorted({v for p in polys for v in p.variables} - set(params))
        unknowns = vs
    return PolySystem(polys, tuple(unknowns), tuple(params))


def cmd_groebner(cfg: RunConfig, args) -> int:
    system = read_system(_read(args.system))
    if args.vars:
        order_vars = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    else:
        order_vars = system.variables
    order = MonomialOrder(args.order, order_vars)
    gb = buchberger(system, order, cfg.budget)
    payload = {
        "order": args.order,
        "variables": list(order.priority),
        "size": len(gb.polys),
        "zero_dimensional": is_zero_dimensional(gb, system.unknowns),
        "basis": [str(g) for g in gb.polys],
    }
    if args.certify:
        payload["certified"] = certify(gb)
    if cfg.meta:
        payload["stats"] = {k: (round(v, 3) if isinstance(v, float) else v) for k, v in gb.stats.items()}
    _emit(cfg, payload, "\n".join(payload["basis"]) + "\n")
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=30, help="decimal digits in reports (>= 6)")
    common.add_argument("--budget-pairs", type=int, default=None)
    common.add_argument("--budget-bits", type=int, default=None)
    common.add_argument("--budget-seconds", type=float, default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "text", "csv"), default=None)
    common.add_argument("--text", action="store_true", help="shorthand for --format text")
    common.add_argument("--no-meta", action="store_true", help="omit timings for byte-identical reports")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="circalg", description="Symbolic circuit analysis and sizing.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="symbolic transfer function of a netlist")
    a.add_argument("netlist")
    a.add_argument("--subst", action="append", metavar="NAME=VALUE")

    s = sub.add_parser("size", parents=[common], help="solve a design spec")
    s.add_argument("spec")

    lad = sub.add_parser("ladder", parents=[common], help="LC ladder tools")
    lsub = lad.add_subparsers(dest="sub", required=True)
    li = lsub.add_parser("impedance", parents=[common])
    li.add_argument("values", help="comma-separated L1,C1,L2,...")
    le = lsub.add_parser("expand", parents=[common])
    le.add_argument("expr", help="impedance in s, e.g. '(s^2+1)/s'")
    ls = lsub.add_parser("synth", parents=[common])
    ls.add_argument("--target", default=None, help="numeric impedance; omit for the symbolic first stage")

    r = sub.add_parser("reduce", parents=[common], help="series/parallel/delta-wye reduction")
    r.add_argument("network")
    r.add_argument("--no-delta-wye", action="store_true")
    r.add_argument("--max-transforms", type=int, default=50)
    r.add_argument("--check", action="store_true", help="verify every step against MNA")

    b = sub.add_parser("bode", parents=[common], help="magnitude/phase samples")
    b.add_argument("tf", help="transfer-function JSON (or analyze report) or a .cir netlist")
    b.add_argument("--f-lo", type=float, default=1.0)
    b.add_argument("--f-hi", type=float, default=1e6)
    b.add_argument("--ppd", type=int, default=20)
    b.add_argument("--subst", action="append", metavar="NAME=VALUE")

    g = sub.add_parser("groebner", parents=[common], help="Groebner basis of a polynomial system file")
    g.add_argument("system")
    g.add_argument("--order", choices=("lex", "grevlex"), default="lex")
    g.add_argument("--vars", default=None, help="comma-separated variable priority")
    g.add_argument("--certify", action="store_true", help="check all S-polynomials reduce to zero")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "size": cmd_size,
    "ladder": cmd_ladder,
    "reduce": cmd_reduce,
    "bode": cmd_bode,
    "groebner": cmd_groebner,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        env = Budget.from_env()
        budget = Budget(
            args.budget_pairs if args.budget_pairs is not None else env.max_pairs,
            args.budget_bits if args.budget_bits is not None else env.max_coeff_bits,
            args.budget_seconds if args.budget_seconds is not None else env.max_seconds,
        )
        fmt = "text" if args.text else (args.fmt or ("csv" if args.command == "bode" else "json"))
        cfg = RunConfig(args.command, [], args.digits, budget, args.out, fmt, not args.no_meta)
        return COMMANDS[args.command](cfg, args)
    except GroebnerBudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PositiveDimensional as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, NetlistError, PolySyntaxError, SingularCircuit, NotRealizable, ValueError,
            ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # invariant violations and bugs
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
