"""Residual enclosures of the reference R values, and how far those digits are from the true roots.

Needs mpmath for the Newton refinement step (pip install mpmath); the interval
part uses only the package.

    python scripts/residual_pinning.py [--radius-exp 28]
"""

import argparse
from pathlib import Path

import mpmath as mp
from gmpy2 import mpq

from circalg.algebra.poly import MultiPoly
from circalg.algebra.scalars import parse_scalar
from circalg.netlist.parse import parse_netlist
from circalg.netlist.tf import derive_transfer_function
from circalg.realsolve.interval import Interval, eval_interval
from circalg.sizing.systems import DesignSpec, coefficient_match, feldtkeller_system

ROOT = Path(__file__).resolve().parent.parent

DESIGNS = {
    "butterworth": ((1, 1, 1, 1), ["0.133933818297194652631087580090", "3.893036697318392402871746149006",
                                   "2.479192111455558403082198766696", "0.773590398536329977043175927841"]),
    "chebyshev": ((1, 2, 2, 1), ["0.263638090854794185461593787592", "0.624164765447879000316525786179",
                                 "2.645185226758545312744750592839", "3.249013399873649633437777451232"]),
}


def frozen_values(caps):
    return {"K": MultiPoly.const(2), **{f"C{i}": MultiPoly.const(c) for i, c in enumerate(caps, start=1)}}


def mp_eval(p, env):
    total = mp.mpf(0)
    for mono, c in p.terms.items():
        t = mp.mpf(int(c.numerator)) / int(c.denominator)
        for v, e in mono:
            t *= env[v] ** e
        total += t
    return total


def newton_root(tf, mode, caps, start):
    """Refine the R values at 80 digits on the composite system F(R) = feldtkeller(D_i(R)/D_0(R))."""
    fr = frozen_values(caps)
    D = [c.substitute(fr) for c in tf.den_coeffs()]
    fk = feldtkeller_system(["a1", "a2", "a3", "a4"], mode, linearize_top=False)

    def F(*R):
        env = {f"R{i}": R[i - 1] for i in range(1, 5)}
        d = [mp_eval(x, env) for x in D]
        a = {f"a{i}": d[i] / d[0] for i in range(1, 5)}
        return [mp_eval(e, a) for e in fk]

    return mp.findroot(F, [mp.mpf(r) for r in start], tol=mp.mpf(10) ** -70)


def residuals(tf, mode, caps, rvals, radius):
    fr = frozen_values(caps)
    system = coefficient_match(tf, DesignSpec(mode, 4), fr)
    env = {f"R{i}": Interval(parse_scalar(r) - radius, parse_scalar(r) + radius) for i, r in enumerate(rvals, start=1)}
    D = [eval_interval(c.substitute(fr), env) for c in tf.den_coeffs()]
    env.update({f"a{i}": D[i] / D[0] for i in range(1, 5)})
    return [eval_interval(e.substitute(fr), env) for e in system.equations]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius-exp", type=int, default=28, help="box radius 10^-k around each value")
    args = ap.parse_args()
    mp.mp.dps = 80
    radius = mpq(1, 10**args.radius_exp)
    tf = derive_transfer_function(parse_netlist((ROOT / "data/netlists/sallen_key4.cir").read_text()))
    for mode, (caps, rvals) in DESIGNS.items():
        root = newton_root(tf, mode, caps, rvals)
        errs = [abs(root[i] - mp.mpf(r)) for i, r in enumerate(rvals)]
        print(f"{mode}: max |reference - root| = {mp.nstr(max(errs), 3)}")
        for i in range(4):
            print(f"  R{i + 1} = {mp.nstr(root[i], 40)}")
        ivs = residuals(tf, mode, caps, rvals, radius)
        print(f"  radius 1e-{args.radius_exp}: all contain 0: {all(iv.contains_zero() for iv in ivs)}, "
              f"max width {float(max(iv.width for iv in ivs)):.2e}")


if __name__ == "__main__":
    main()
