"""Size the fourth-order filter for a Butterworth response and summarize the result.

    python scripts/butterworth_sizing.py [--spec data/specs/butterworth4.json]
"""

import argparse
import time
from pathlib import Path

from circalg.sizing.pipeline import load_design, solve_design
from circalg.realsolve.interval import certified_digits

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--spec", default=ROOT / "data/specs/butterworth4.json")
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()

    system, opts, _ = load_design(args.spec)
    t0 = time.perf_counter()
    res = solve_design(system, opts)
    wall = time.perf_counter() - t0

    elim = res.eliminant
    print(f"eliminant in {res.eliminant_var}: degree {elim.degree(res.eliminant_var)}, {len(elim.terms)} terms")
    print(f"basis: {len(res.basis.polys)} elements, real roots of eliminant: {res.real_root_count}")
    c = res.census
    if c is not None:
        print(f"complex solutions: {c.solutions}, distinct coefficient points: {c.distinct_points}, "
              f"Hurwitz: {c.hurwitz_solutions}")
    print(f"admissible: {len(res.admissible)}, rejected: {len(res.rejected)}, undetermined: {len(res.undetermined)}")
    for a in res.admissible:
        for v in system.unknowns:
            print(f"  {v} = {certified_digits(a.box.enclosure(v), args.digits)}")
    for r in res.rejected:
        print(f"  rejected: {', '.join(r.reasons)}")
    print(f"wall time {wall:.1f} s; phases {res.timing}")


if __name__ == "__main__":
    main()
