"""Divide the degree-72 eliminant by the degree-18 factor over Q(sqrt 2).

Also checks that the eliminant produced by the sizing pipeline is proportional
to the reference coefficients when --pipeline is given (about 10 s).
"""

import argparse
import time
from pathlib import Path

from gmpy2 import mpq

from circalg.algebra.scalars import QuadExt
from circalg.realsolve import univariate as U

ROOT = Path(__file__).resolve().parent.parent

# coefficients of R4^(4i), i = 0..18
P_REF = [1, -160, 13872, -788512, 31505120, -920274816, 20065991808, -328437088768, 4000414289152,
         -35535204282368, 223781766674432, -956822102532096, 2535921430958080, -3050522934050816,
         -2341746368053248, 10182414501412864, -1806331484831744, -13996296348106752, 2888816545234944]
# (a, b) for a + b sqrt2 at R4^(2i), i = 0..9
FACTOR = [(-10, 7), (-12, 8), (280, -196), (520, -352), (-2824, 1900), (-10816, 6656), (-13904, 7368),
          (-8288, 5952), (1280, 6592), (10368, 0)]


def spread(coeffs, step, zero):
    out = [zero] * (step * (len(coeffs) - 1) + 1)
    out[::step] = coeffs
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pipeline", action="store_true", help="also recompute the eliminant")
    args = ap.parse_args()

    t0 = time.perf_counter()
    p = spread([QuadExt(c) for c in P_REF], 4, QuadExt(0))
    f = spread([QuadExt(a, b) for a, b in FACTOR], 2, QuadExt(0))
    q, r = U.divmod_(p, f)
    print(f"quotient degree {U.degree(q)}, remainder zero: {all(c == 0 for c in r)} "
          f"({time.perf_counter() - t0:.2f} s)")
    # the conjugate factor divides as well; together they give a rational factor of degree 36
    fbar = [c.conjugate() for c in f]
    q2, r2 = U.divmod_(q, fbar)
    print(f"conjugate factor divides the quotient: {all(c == 0 for c in r2)}")
    roots = [iv for iv in U.isolate_real_roots(f)]
    print(f"real roots of the factor: {len(roots)}")

    if args.pipeline:
        from circalg.sizing.pipeline import load_design, solve_design

        system, opts, _ = load_design(ROOT / "data/specs/butterworth4.json")
        res = solve_design(system, opts)
        ours = [mpq(c) for c in res.eliminant.univariate_coeffs(res.eliminant_var)]
        ref = spread([mpq(c) for c in P_REF], 4, mpq(0))
        ratio = ours[-1] / ref[-1]
        print(f"pipeline eliminant proportional to reference: {all(o == ratio * x for o, x in zip(ours, ref))} "
              f"(ratio {ratio})")


if __name__ == "__main__":
    main()
