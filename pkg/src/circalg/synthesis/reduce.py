"""Two-terminal network reduction by series, parallel, delta-wye and wye-delta steps.

Each step emits the equation giving the new edge label in terms of the old
ones, so the trace is a straight-line program from element values to the
driving-point impedance.

Network files:

    * bridge
    Z1 a c R1
    Z2 c b 1/(C2*s)
    .terminals a b
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from ..algebra.ratfunc import RationalFunction, parse_rational
from ..netlist.parse import Element, NetlistError

KINDS = ("series", "parallel", "delta_wye", "wye_delta", "remove_loop", "remove_pendant")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class Edge:
    name: str
    a: str
    b: str
    z: RationalFunction

    def other(self, node: str) -> str:
        return self.b if node == self.a else self.a


@dataclass
class TwoTerminalNetwork:
    edges: list
    terminals: tuple

    def __post_init__(self):
        t1, t2 = self.terminals
        if t1 == t2:
            raise ValueError("terminals must be distinct")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise ValueError("edge names must be unique")
        for e in self.edges:
            e.z = RationalFunction.coerce(e.z)

    def copy(self) -> "TwoTerminalNetwork":
        return TwoTerminalNetwork([Edge(e.name, e.a, e.b, e.z) for e in self.edges], self.terminals)

    @property
    def nodes(self) -> list:
        out = []
        for e in self.edges:
            for n in (e.a, e.b):
                if n not in out:
                    out.append(n)
        for t in self.terminals:
            if t not in out:
                out.append(t)
        return out

    def incident(self, node: str) -> list:
        return [e for e in self.edges if node in (e.a, e.b)]

    def degree(self, node: str) -> int:
        return sum((e.a == node) + (e.b == node) for e in self.edges)

    def is_connected(self) -> bool:
        nodes = self.nodes
        seen, stack = {nodes[0]}, [nodes[0]]
        while stack:
            n = stack.pop()
            for e in self.incident(n):
                m = e.other(n)
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(nodes)

    def to_elements(self) -> list:
        return [Element(e.name, "Z", (e.a, e.b), e.z) for e in self.edges]

    def impedance_mna(self) -> RationalFunction:
        from ..netlist.mna import driving_point_impedance

        return driving_point_impedance(self.to_elements(), *self.terminals)


def parse_network(text: str) -> TwoTerminalNetwork:
    edges, terminals = [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line or line.startswith("*"):
            continue
        toks = line.split()
        if toks[0].lower() == ".terminals":
            if len(toks) != 3:
                raise NetlistError(".terminals takes two nodes", lineno)
            terminals = (toks[1], toks[2])
            continue
        if toks[0].startswith("."):
            raise NetlistError(f"unknown directive {toks[0]}", lineno)
        if len(toks) < 4:
            raise NetlistError("expected: name node node impedance", lineno)
        name = toks[0]
        if not _NAME.match(name):
            raise NetlistError(f"bad edge name {name!r}", lineno)
        try:
            z = parse_rational(" ".join(toks[3:]))
        except (ValueError, ZeroDivisionError) as exc:
            raise NetlistError(str(exc), lineno) from None
        edges.append(Edge(name, toks[1], toks[2], z))
    if terminals is None:
        raise NetlistError("missing '.terminals a b'")
    try:
        net = TwoTerminalNetwork(edges, terminals)
    except ValueError as exc:
        raise NetlistError(str(exc)) from None
    return net


@dataclass
class ReductionStep:
    kind: str
    removed: list  # edge names
    added: list  # edge names
    nodes: list
    equations: list  # (new name, expression in old names)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "removed": self.removed,
            "added": self.added,
            "nodes": self.nodes,
            "equations": [f"{lhs} = {rhs}" for lhs, rhs in self.equations],
        }


@dataclass
class ReductionTrace:
    steps: list
    final: RationalFunction | None
    remainder: TwoTerminalNetwork | None = None
    labels: dict = field(default_factory=dict)

    @property
    def irreducible(self) -> bool:
        return self.remainder is not None

    def replay(self, net: TwoTerminalNetwork) -> RationalFunction:
        """Re-evaluate the emitted equations starting from the original labels."""
        env = {e.name: e.z for e in net.edges}
        last = None
        for st in self.steps:
            for lhs, rhs in st.equations:
                expr = parse_rational(rhs)
                env[lhs] = expr.substitute({v: env[v] for v in set(expr.num.variables) | set(expr.den.variables)})
                last = lhs
        if last is None:
            return env[net.edges[0].name]
        return env[last]

    def to_json(self) -> dict:
        out = {"steps": [s.to_json() for s in self.steps], "irreducible": self.irreducible}
        if self.final is not None:
            out["impedance"] = {"numerator": str(self.final.num), "denominator": str(self.final.den)}
        if self.remainder is not None:
            out["irreducible_remainder"] = [
                {"name": e.name, "a": e.a, "b": e.b, "z": str(e.z)} for e in self.remainder.edges
            ]
        return out


def _node_key(n: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(n))]


class _Reducer:
    def __init__(self, net: TwoTerminalNetwork, check: bool = False):
        self.net = net.copy()
        self.steps: list = []
        self.reference = net.impedance_mna() if check else None
        used = {e.name for e in net.edges} | set(net.nodes)
        self._counter = itertools.count(len(net.edges) + 1)
        self._used = used

    def fresh(self, prefix: str) -> str:
        while True:
            name = f"{prefix}{next(self._counter)}"
            if name not in self._used:
                self._used.add(name)
                return name

    # -- the four simple reductions -------------------------------------------
    def simple_candidates(self, net: TwoTerminalNetwork | None = None):
        net = net or self.net
        t = set(net.terminals)
        for e in net.edges:
            if e.a == e.b:
                yield ("remove_loop", e)
        for n in sorted(net.nodes, key=_node_key):
            if n in t:
                continue
            inc = net.incident(n)
            if len(inc) == 1:
                yield ("remove_pendant", inc[0])
            elif len(inc) == 2 and net.degree(n) == 2:
                yield ("series", n)
        seen = {}
        for e in net.edges:
            if e.a == e.b:
                continue
            key = frozenset((e.a, e.b))
            if key in seen:
                yield ("parallel", (seen[key], e))
            else:
                seen[key] = e

    def apply_simple(self, cand) -> None:
        kind, obj = cand
        net = self.net
        if kind in ("remove_loop", "remove_pendant"):
            net.edges.remove(obj)
            self.steps.append(ReductionStep(kind, [obj.name], [], [obj.a, obj.b], []))
        elif kind == "series":
            e1, e2 = net.incident(obj)
            new = Edge(self.fresh("Z"), e1.other(obj), e2.other(obj), e1.z + e2.z)
            self._replace([e1, e2], [new])
            self.steps.append(ReductionStep("series", [e1.name, e2.name], [new.name], [obj],
                                            [(new.name, f"{e1.name} + {e2.name}")]))
        elif kind == "parallel":
            e1, e2 = obj
            new = Edge(self.fresh("Z"), e1.a, e1.b, (e1.z * e2.z) / (e1.z + e2.z))
            self._replace([e1, e2], [new])
            self.steps.append(ReductionStep("parallel", [e1.name, e2.name], [new.name], [e1.a, e1.b],
                                            [(new.name, f"{e1.name}*{e2.name}/({e1.name} + {e2.name})")]))
        self._verify()

    def _verify(self) -> None:
        if self.reference is not None and len(self.net.edges) and not (self.net.impedance_mna() == self.reference):
            raise AssertionError(f"step {self.steps[-1].to_json()} changed the terminal impedance")

    def _replace(self, old, new) -> None:
        pos = min(self.net.edges.index(e) for e in old)
        for e in old:
            self.net.edges.remove(e)
        for i, e in enumerate(new):
            self.net.edges.insert(pos + i, e)

    def simplify(self) -> None:
        while True:
            cand = next(self.simple_candidates(), None)
            if cand is None:
                return
            self.apply_simple(cand)

    def done(self) -> bool:
        t1, t2 = self.net.terminals
        return len(self.net.edges) == 1 and {self.net.edges[0].a, self.net.edges[0].b} == {t1, t2}

    # -- delta-wye and wye-delta ------------------------------------------------
    def transform_candidates(self):
        net = self.net
        t = set(net.terminals)
        between = {}
        for e in net.edges:
            between.setdefault(frozenset((e.a, e.b)), []).append(e)
        nodes = sorted(net.nodes, key=_node_key)
        for a, b, c in itertools.combinations(nodes, 3):
            es = [between.get(frozenset(p), []) for p in ((a, b), (b, c), (a, c))]
            if all(len(x) == 1 for x in es):
                yield ("delta_wye", (a, b, c), [x[0] for x in es])
        for n in nodes:
            if n in t:
                continue
            inc = net.incident(n)
            if len(inc) == 3 and len({e.other(n) for e in inc}) == 3:
                yield ("wye_delta", (n,), inc)

    def apply_transform(self, cand) -> None:
        kind, nodes, edges = cand
        if kind == "delta_wye":
            a, b, c = nodes
            eab, ebc, eac = edges
            center = self.fresh("n")
            total = eab.z + ebc.z + eac.z
            names = [self.fresh("Z") for _ in range(3)]
            new = [
                Edge(names[0], a, center, eab.z * eac.z / total),
                Edge(names[1], b, center, eab.z * ebc.z / total),
                Edge(names[2], c, center, ebc.z * eac.z / total),
            ]
            s = f"({eab.name} + {ebc.name} + {eac.name})"
            eqs = [
                (names[0], f"{eab.name}*{eac.name}/{s}"),
                (names[1], f"{eab.name}*{ebc.name}/{s}"),
                (names[2], f"{ebc.name}*{eac.name}/{s}"),
            ]
            self._replace(list(edges), new)
            self.steps.append(ReductionStep(kind, [e.name for e in edges], names, [a, b, c, center], eqs))
        else:
            (n,) = nodes
            ea, eb, ec = edges
            a, b, c = (e.other(n) for e in edges)
            num = ea.z * eb.z + eb.z * ec.z + ec.z * ea.z
            names = [self.fresh("Z") for _ in range(3)]
            new = [Edge(names[0], a, b, num / ec.z), Edge(names[1], b, c, num / ea.z), Edge(names[2], a, c, num / eb.z)]
            s = f"({ea.name}*{eb.name} + {eb.name}*{ec.name} + {ec.name}*{ea.name})"
            eqs = [(names[0], f"{s}/{ec.name}"), (names[1], f"{s}/{ea.name}"), (names[2], f"{s}/{eb.name}")]
            self._replace(list(edges), new)
            self.steps.append(ReductionStep(kind, [e.name for e in edges], names, [a, b, c, n], eqs))
        self._verify()

    def lookahead(self, cand) -> int:
        """Number of series/parallel/pendant/loop reductions enabled right after `cand`."""
        saved = (self.net, self.steps, self._counter, set(self._used), self.reference)
        self.net, self.steps, self.reference = self.net.copy(), [], None
        self._counter = itertools.count(10**9)
        cand = (cand[0], cand[1], [next(e for e in self.net.edges if e.name == x.name) for x in cand[2]])
        self.apply_transform(cand)
        score = sum(1 for _ in self.simple_candidates())
        self.net, self.steps, self._counter, self._used, self.reference = saved
        return score


def reduce_network(net: TwoTerminalNetwork, strategy: str = "delta_wye", max_transforms: int = 50,
                   check: bool = False) -> ReductionTrace:
    """Reduce to a single edge between the terminals.

    strategy "series_parallel" never transforms; "delta_wye" applies delta-wye
    or wye-delta at the site enabling the most simple reductions next (ties:
    delta-wye first, then the lowest node names), at most `max_transforms`
    times.  A network that cannot be finished comes back with the remaining
    graph in `remainder`.  With check=True every step is compared against the
    MNA driving-point impedance of the original network.
    """
    if strategy not in ("series_parallel", "delta_wye"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not net.edges:
        raise ValueError("network has no edges")
    if not net.is_connected():
        raise ValueError("network is not connected")
    r = _Reducer(net, check)
    transforms = 0
    last_added: set = set()
    while True:
        r.simplify()
        if r.done():
            return ReductionTrace(r.steps, r.net.edges[0].z)
        if strategy == "series_parallel" or transforms >= max_transforms:
            break
        cands = [c for c in r.transform_candidates() if not set(e.name for e in c[2]) <= last_added]
        if not cands:
            break
        ranked = sorted(
            cands,
            key=lambda c: (-r.lookahead(c), c[0] != "delta_wye", [_node_key(n) for n in c[1]]),
        )
        best = ranked[0]
        r.apply_transform(best)
        last_added = set(r.steps[-1].added)
        transforms += 1
    if not any(t in r.net.nodes for t in net.terminals) or not r.net.edges:
        raise ValueError("terminals are not connected")
    return ReductionTrace(r.steps, None, r.net)
