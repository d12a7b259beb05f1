"""Lex basis of the BJT pole-placement system and the numeric designs at p1=-10, p2=-1000."""

import time
from pathlib import Path

from circalg.algebra.parse import parse_poly
from circalg.cli import read_system
from circalg.groebner import buchberger, certify
from circalg.realsolve.interval import certified_digits
from circalg.sizing.pipeline import load_design, solve_design

ROOT = Path(__file__).resolve().parent.parent


def main():
    t0 = time.perf_counter()
    gb = buchberger(read_system((ROOT / "data/systems/bjt_eq15.txt").read_text()))
    print(f"lex basis ({' > '.join(gb.order.priority)}): {len(gb.polys)} elements, "
          f"certified {certify(gb)}, {time.perf_counter() - t0:.2f} s")
    for g in gb.polys:
        lead = [v for v in gb.order.priority if g.degree(v) > 0][0]
        print(f"  leading variable {lead:3s} degree in Ce {g.degree('Ce')}, {len(g.terms)} terms")
    (elim,) = [g for g in gb.polys if not set(g.variables) & {"k", "Rs", "Ca"}]
    print(f"Ce eliminant: degree {elim.degree('Ce')} in Ce")
    # factor Ce off and show the remaining cubic's behaviour under p -> -p
    neg = elim.substitute({"p1": parse_poly("-p1"), "p2": parse_poly("-p2")})
    print(f"eliminant invariant under p -> -p: {neg.primitive() in (elim.primitive(), -elim.primitive())}")

    system, opts, _ = load_design(ROOT / "data/specs/bjt_poles.json")
    res = solve_design(system, opts)
    print(f"solutions at p1=-10, p2=-1000: {len(res.solutions)}")
    for a in res.admissible:
        vals = ", ".join(f"{v}={certified_digits(a.box.enclosure(v), 8)}" for v in system.unknowns)
        print(f"  admissible: {vals}")
    for r in res.rejected:
        vals = ", ".join(f"{v}={r.box.values[v]}" for v in system.unknowns if r.box.is_exact(v))
        print(f"  rejected ({', '.join(r.reasons)}): exact {vals}")


if __name__ == "__main__":
    main()
