"""Modified nodal analysis in the polynomial ring.

Resistors, inductors and generic impedances get a branch current with the
cleared constitutive law den*(v+ - v-) - num*i = 0, capacitors and the output
admittance of the two-port are stamped as admittances.  The system is solved
by Cramer's rule with fraction-free (Bareiss) determinants, so no symbolic
division ever happens.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..algebra.poly import MultiPoly, exact_div
from ..algebra.ratfunc import RationalFunction
from .parse import Element, Netlist

log = logging.getLogger(__name__)

S = MultiPoly.symbol("s")
ZERO = MultiPoly()
ONE = MultiPoly.const(1)


class SingularCircuit(ArithmeticError):
    pass


def bareiss_det(matrix) -> MultiPoly:
    """Determinant over the polynomial ring by fraction-free elimination."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        # sparsest nonzero pivot keeps intermediate polynomials small
        piv = min((i for i in range(k, n) if not m[i][k].is_zero()), key=lambda i: len(m[i][k]), default=None)
        if piv is None:
            return ZERO
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                if mik.is_zero():
                    t = row_i[j] * pk
                else:
                    t = row_i[j] * pk - mik * row_k[j]
                row_i[j] = t if prev == ONE or t.is_zero() else exact_div(t, prev)
            row_i[k] = ZERO
        prev = pk
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


@dataclass
class MNASystem:
    matrix: list
    rhs: list
    unknowns: list  # labels: ("v", node) or ("i", element name)

    def index(self, label) -> int:
        return self.unknowns.index(label)

    def replaced(self, col: int) -> list:
        return [row[:col] + [self.rhs[r]] + row[col + 1 :] for r, row in enumerate(self.matrix)]


def build_mna(elements, ground: str, drive: str | None = None) -> MNASystem:
    """Assemble A x = b.  `drive` names a V source (set to 1) or an I source (1 A)."""
    nodes = []
    for e in elements:
        for n in e.nodes:
            if n != ground and n not in nodes:
                nodes.append(n)
    labels = [("v", n) for n in nodes]
    for e in elements:
        if e.kind in ("R", "L", "Z", "V", "E", "Q"):
            labels.append(("i", e.name))
    idx = {lab: i for i, lab in enumerate(labels)}
    size = len(labels)
    A = [[ZERO] * size for _ in range(size)]
    b = [ZERO] * size

    def add(r, c, val):
        if r is not None and c is not None:
            A[r][c] = A[r][c] + val

    def v(node):
        return None if node == ground else idx[("v", node)]

    for e in elements:
        k = e.kind
        if k == "C":
            y = e.value * S
            p, q = v(e.nodes[0]), v(e.nodes[1])
            add(p, p, y), add(q, q, y), add(p, q, -y), add(q, p, -y)
            continue
        if k == "I":
            # current of 1 A flowing out of nodes[0] through the source into nodes[1]
            p, q = v(e.nodes[0]), v(e.nodes[1])
            if p is not None:
                b[p] = b[p] - ONE
            if q is not None:
                b[q] = b[q] + ONE
            continue
        br = idx[("i", e.name)]
        if k in ("R", "L", "Z", "V", "E"):
            p, q = v(e.nodes[0]), v(e.nodes[1])
            add(p, br, ONE), add(q, br, -ONE)
            if k == "V":
                add(br, p, ONE), add(br, q, -ONE)
                if e.name == drive or (drive is None and e.value is None):
                    b[br] = ONE
                elif e.value is not None:
                    b[br] = e.value
            elif k == "E":
                cp, cq = v(e.nodes[2]), v(e.nodes[3])
                add(br, p, ONE), add(br, q, -ONE)
                add(br, cp, -e.value), add(br, cq, e.value)
            else:
                if k == "R":
                    num, den = e.value, ONE
                elif k == "L":
                    num, den = e.value * S, ONE
                else:
                    z = RationalFunction.coerce(e.value)
                    num, den = z.num, z.den
                add(br, p, den), add(br, q, -den), add(br, br, -num)
        elif k == "Q":
            bn, cn, en = (v(n) for n in e.nodes)
            h11, h12, h21, h22 = (e.param(x) for x in ("h11", "h12", "h21", "h22"))
            # base current i_b enters at the base and leaves at the emitter
            add(bn, br, ONE), add(en, br, -ONE)
            # collector current h21*i_b + h22*(vc - ve)
            add(cn, br, h21), add(en, br, -h21)
            add(cn, cn, h22), add(cn, en, -h22), add(en, cn, -h22), add(en, en, h22)
            # vb - ve = h11*i_b + h12*(vc - ve)
            add(br, bn, ONE), add(br, en, -ONE), add(br, br, -h11)
            add(br, cn, -h12), add(br, en, h12)
        else:
            raise ValueError(f"element kind {k!r} not supported")
    return MNASystem(A, b, labels)


def solve_for(system: MNASystem, label) -> tuple[MultiPoly, MultiPoly]:
    """(numerator, denominator) of one unknown by Cramer's rule."""
    D = bareiss_det(system.matrix)
    if D.is_zero():
        raise SingularCircuit("MNA matrix is singular: the circuit is ill-posed")
    N = bareiss_det(system.replaced(system.index(label)))
    return N, D


def node_voltage(net: Netlist, node: str, drive: str | None = None):
    system = build_mna(net.elements, net.ground, drive or net.input_source)
    if node == net.ground:
        return ZERO, ONE
    return solve_for(system, ("v", node))


def driving_point_impedance(elements, a: str, b: str) -> RationalFunction:
    """Impedance seen between terminals a and b, by injecting 1 A into a."""
    probe = Element("I__probe", "I", (b, a))
    system = build_mna(list(elements) + [probe], b)
    N, D = solve_for(system, ("v", a))
    return RationalFunction(N, D).normalized()
