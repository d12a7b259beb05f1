"""Compare direct lex Buchberger with grevlex followed by FGLM on a sizing system.

Direct lex on the Butterworth filter system does not finish in reasonable time;
use --seconds to cap it (the default 120 s cap ends in a budget error).

    python scripts/lex_strategies.py [--spec ...] [--seconds 120]
"""

import argparse
import time
from dataclasses import replace
from pathlib import Path

from circalg.algebra.poly import MonomialOrder
from circalg.groebner import Budget, GroebnerBudgetExceeded, buchberger, fglm
from circalg.sizing.pipeline import load_design

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spec", default=ROOT / "data/specs/butterworth4.json")
    ap.add_argument("--seconds", type=float, default=120.0)
    args = ap.parse_args()
    system, _, _ = load_design(args.spec)
    polys = system.equations
    vars_ = tuple(system.unknowns)

    t0 = time.perf_counter()
    grev = buchberger(polys, MonomialOrder("grevlex", vars_))
    t1 = time.perf_counter()
    lex = fglm(grev, MonomialOrder("lex", vars_))
    t2 = time.perf_counter()
    print(f"grevlex: {len(grev.polys)} elements in {t1 - t0:.2f} s; "
          f"FGLM: {len(lex.polys)} elements, quotient dimension {lex.stats['quotient_dim']}, {t2 - t1:.2f} s")

    t0 = time.perf_counter()
    try:
        direct = buchberger(polys, MonomialOrder("lex", vars_), replace(Budget.from_env(), max_seconds=args.seconds))
        same = direct.polys == lex.polys
        print(f"direct lex: {len(direct.polys)} elements in {time.perf_counter() - t0:.1f} s; same basis: {same}")
    except GroebnerBudgetExceeded as exc:
        print(f"direct lex: stopped after {time.perf_counter() - t0:.1f} s ({exc})")


if __name__ == "__main__":
    main()
