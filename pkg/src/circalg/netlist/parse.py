"""Line-oriented netlist format.

    R1 in n1 R1          # resistor, value a symbol
    C2 n2 out 10n        # SI suffixes k M m u n p
    V1 in 0 input        # the driving source
    E1 out 0 n1 0 K      # VCVS: out+ out- ctl+ ctl- gain
    Q1 b c 0 h11=672 h12=0 h21=96 h22=35u
    .out out
    .gnd 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.parse import PolySyntaxError, parse_poly
from ..algebra.poly import MultiPoly
from ..algebra.scalars import to_scalar

SI = {"p": Fraction(1, 10**12), "n": Fraction(1, 10**9), "u": Fraction(1, 10**6),
      "m": Fraction(1, 10**3), "k": Fraction(10**3), "M": Fraction(10**6)}
_NUM = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?([pnumkM])?$")
KINDS = {"R": 2, "L": 2, "C": 2, "V": 2, "E": 4, "Q": 3}
H_PARAMS = ("h11", "h12", "h21", "h22")


class NetlistError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = f"line {line}" + (f", column {col}" if col else "") + ": " if line else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


def parse_value(text: str) -> MultiPoly:
    """Number with optional SI suffix (exact), or a polynomial expression in symbols."""
    m = _NUM.match(text)
    if m:
        suffix = m.group(4)
        base = text[:-1] if suffix else text
        return MultiPoly.const(to_scalar(Fraction(base) * (SI[suffix] if suffix else 1)))
    return parse_poly(text)


@dataclass(frozen=True)
class Element:
    name: str
    kind: str
    nodes: tuple
    value: MultiPoly | None = None
    params: tuple = ()  # ((key, MultiPoly), ...) for the h-parameter two-port
    line: int = 0

    def param(self, key: str) -> MultiPoly:
        return dict(self.params)[key]


@dataclass
class Netlist:
    elements: list
    ground: str
    output: str | None = None
    title: str = ""
    input_source: str | None = field(default=None)

    @property
    def nodes(self) -> list:
        seen = []
        for e in self.elements:
            for n in e.nodes:
                if n not in seen:
                    seen.append(n)
        return seen

    def symbols(self) -> list:
        out = set()
        for e in self.elements:
            if e.value is not None:
                out.update(e.value.variables)
            for _, v in e.params:
                out.update(v.variables)
        return sorted(out)

    def substitute(self, bindings: dict) -> "Netlist":
        b = {k: MultiPoly.coerce(v) if not isinstance(v, MultiPoly) else v for k, v in bindings.items()}
        els = []
        for e in self.elements:
            val = e.value.substitute(b) if e.value is not None else None
            params = tuple((k, v.substitute(b)) for k, v in e.params)
            els.append(Element(e.name, e.kind, e.nodes, val, params, e.line))
        return Netlist(els, self.ground, self.output, self.title, self.input_source)


def _col(raw: str, tok: str) -> int:
    return raw.find(tok) + 1


def parse_netlist(text: str, *, check_dangling: bool = True) -> Netlist:
    elements: list[Element] = []
    names: set = set()
    ground = None
    output = None
    title = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.strip().startswith("#") and not title and not elements:
                title = raw.strip().lstrip("#").strip()
            continue
        toks = line.split()
        head = toks[0]
        if head.startswith("."):
            if head not in (".out", ".gnd") or len(toks) != 2:
                raise NetlistError(f"bad directive {line!r}", lineno, 1)
            if head == ".out":
                output = toks[1]
            else:
                ground = toks[1]
            continue
        kind = head[0].upper()
        if kind not in KINDS:
            raise NetlistError(f"unknown element kind {head[0]!r}", lineno, 1)
        if head in names:
            raise NetlistError(f"duplicate element name {head}", lineno, 1)
        nn = KINDS[kind]
        if kind == "Q":
            if len(toks) < 1 + nn:
                raise NetlistError(f"{head} needs base, collector and emitter nodes", lineno, len(raw))
            nodes = tuple(toks[1:4])
            params = {k: MultiPoly.symbol(k) for k in H_PARAMS}
            for tok in toks[4:]:
                if "=" not in tok:
                    raise NetlistError(f"expected key=value, got {tok!r}", lineno, _col(raw, tok))
                k, v = tok.split("=", 1)
                if k not in H_PARAMS:
                    raise NetlistError(f"unknown two-port parameter {k!r}", lineno, _col(raw, tok))
                params[k] = _value(v, raw, lineno)
            el = Element(head, "Q", nodes, None, tuple((k, params[k]) for k in H_PARAMS), lineno)
        else:
            if len(toks) != 2 + nn:
                raise NetlistError(
                    f"{head} expects {nn} nodes and a value, got {len(toks) - 1} fields", lineno, len(raw.rstrip()) + 1
                )
            nodes = tuple(toks[1 : 1 + nn])
            vtok = toks[1 + nn]
            if kind == "V":
                val = None if vtok == "input" else _value(vtok, raw, lineno)
            else:
                val = _value(vtok, raw, lineno)
            el = Element(head, kind, nodes, val, (), lineno)
        names.add(head)
        elements.append(el)
    if not elements:
        raise NetlistError("netlist has no elements")
    allnodes = {n for e in elements for n in e.nodes}
    if ground is None:
        ground = "0" if "0" in allnodes else ("gnd" if "gnd" in allnodes else None)
    if ground is None or ground not in allnodes:
        raise NetlistError("missing ground: add '.gnd <node>' or use node 0")
    if output is not None and output not in allnodes:
        raise NetlistError(f"output node {output!r} does not appear in any element")
    sources = [e for e in elements if e.kind == "V" and e.value is None]
    if len(sources) > 1:
        raise NetlistError("more than one source marked 'input'", sources[1].line)
    net = Netlist(elements, ground, output, title, sources[0].name if sources else None)
    _check_graph(net, check_dangling)
    return net


def _value(tok: str, raw: str, lineno: int) -> MultiPoly:
    try:
        return parse_value(tok)
    except (PolySyntaxError, ValueError, ZeroDivisionError) as exc:
        raise NetlistError(f"bad value {tok!r} ({exc})", lineno, _col(raw, tok)) from None


def _check_graph(net: Netlist, check_dangling: bool) -> None:
    adj: dict = {}
    degree: dict = {}
    for e in net.elements:
        ns = e.nodes
        for n in ns:
            degree[n] = degree.get(n, 0) + 1
        # controlling terminals of a VCVS draw no current but still tie the node in
        for a in ns:
            for b in ns:
                if a != b:
                    adj.setdefault(a, set()).add(b)
            adj.setdefault(a, set())
    if check_dangling:
        for n, d in degree.items():
            if d < 2 and n != net.ground:
                el = next(e for e in net.elements if n in e.nodes)
                raise NetlistError(f"dangling node {n!r} (only {el.name} connects to it)", el.line)
    seen = {net.ground}
    stack = [net.ground]
    while stack:
        for m in adj.get(stack.pop(), ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    if len(seen) != len(adj):
        lost = sorted(set(adj) - seen)
        raise NetlistError(f"nodes {lost} are not connected to ground")
