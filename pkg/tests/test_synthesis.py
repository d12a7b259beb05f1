import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from circalg.algebra.parse import parse_poly as P
from circalg.algebra.ratfunc import RationalFunction, parse_rational
from circalg.synthesis.ladder import (
    Ladder,
    NotRealizable,
    cauer_expand,
    ladder_impedance,
    ladder_size,
    ladder_sizing_step,
    solve_linear_chain,
)
from circalg.synthesis.reduce import Edge, TwoTerminalNetwork, parse_network, reduce_network

positive = st.fractions(min_value=mpq(1, 9), max_value=20, max_denominator=9)


# -- ladders ----------------------------------------------------------------


def test_all_ones_ladder():
    z = ladder_impedance(Ladder((1, 1, 1, 1, 1, 1)))
    assert z == parse_rational("(s^6 + 5*s^4 + 6*s^2 + 1)/(s^5 + 4*s^3 + 3*s)")


def test_known_expansion():
    lad = cauer_expand(parse_rational("(2*s^2 + 1)/s"))
    assert lad.values == (2, 1)
    assert str(lad) == "L1=2, C1=1"


@settings(max_examples=100)
@given(st.lists(positive, min_size=1, max_size=7))
def test_ladder_round_trip(values):
    lad = Ladder(tuple(values))
    z = ladder_impedance(lad)
    assert cauer_expand(z) == lad


@settings(max_examples=25)
@given(st.lists(positive, min_size=2, max_size=5))
def test_stagewise_sizing_agrees_with_expansion(values):
    lad = Ladder(tuple(values))
    assert ladder_size(ladder_impedance(lad)) == lad


@pytest.mark.parametrize(
    "expr",
    [
        "(s^2 + 1)/(s^2 + 2)",  # degrees not off by one
        "(s^3 + s^2 + 1)/(s^2 + 1)",  # wrong parity
        "(s^2 - 1)/s",  # negative capacitor at the end
    ],
)
def test_not_realizable(expr):
    with pytest.raises(NotRealizable):
        cauer_expand(parse_rational(expr))


def test_not_realizable_keeps_partial_stages():
    # L1 = 1, C1 = 1, then L2 = -1/3
    z = parse_rational("s + s/(s^2 - 3)")
    with pytest.raises(NotRealizable, match="L2") as exc:
        ladder_size(z)
    assert exc.value.partial == [1, 1]


def test_ladder_validation():
    with pytest.raises(ValueError):
        Ladder((1, -2))
    with pytest.raises(ValueError):
        Ladder(())
    assert Ladder.from_lc([1, 2], [3]).values == (1, 3, 2)
    assert Ladder.label(3) == "C2"
    assert Ladder.symbolic(3).to_json() == {"L1": "L1", "C1": "C1", "L2": "L2"}


def test_symbolic_ladder_impedance():
    z = ladder_impedance(Ladder.symbolic(2))
    assert z == parse_rational("(L1*C1*s^2 + 1)/(C1*s)")


def test_first_stage_formulas():
    st_ = ladder_sizing_step()
    printed = {
        "a2": "A2 - A1*A6/A5",
        "a4": "A4 - A3*A6/A5",
        "a5": "A5/k",
        "a1": "A1/k",
        "a3": "A3/k",
        "L1": "A6*k/A5",
    }
    for name, expr in printed.items():
        ours = st_.values[name]
        ref = parse_rational(expr)
        assert (ours.num * ref.den - ref.num * ours.den).is_zero(), name
    assert not st_.degenerate
    assert sorted(map(str, st_.side_conditions)) == ["A5", "k"]


def test_first_stage_degenerate_when_top_coefficient_vanishes():
    st_ = ladder_sizing_step({1: P("A1"), 2: P("A2"), 3: P("A3"), 4: P("A4"), 5: P("A5"), 6: 0})
    assert st_.degenerate


def test_linear_chain_rejects_nonlinear():
    with pytest.raises(ValueError):
        solve_linear_chain([P("x^2 - 2")], ["x"])
    with pytest.raises(ValueError):
        solve_linear_chain([P("x + y - 1")], ["x", "y"])


# -- network reduction -------------------------------------------------------

KINDS = ("R", "L", "C")


def _impedance(kind, v):
    v = mpq(v.numerator, v.denominator)
    if kind == "R":
        return RationalFunction.coerce(P(str(v)))
    if kind == "L":
        return RationalFunction.coerce(P(f"{v}*s"))
    return parse_rational(f"1/({v}*s)")


@st.composite
def sp_networks(draw, max_edges=10):
    """Random series-parallel two-terminal networks with numeric element values."""
    n = draw(st.integers(1, max_edges))
    counter = {"node": 0, "edge": 0}

    def fresh_node():
        counter["node"] += 1
        return f"n{counter['node']}"

    def build(a, b, k):
        if k == 1:
            counter["edge"] += 1
            kind = draw(st.sampled_from(KINDS))
            return [Edge(f"{kind}{counter['edge']}", a, b, _impedance(kind, draw(positive)))]
        left = draw(st.integers(1, k - 1))
        if draw(st.booleans()):
            m = fresh_node()
            return build(a, m, left) + build(m, b, k - left)
        return build(a, b, left) + build(a, b, k - left)

    return TwoTerminalNetwork(build("a", "b", n), ("a", "b"))


@settings(max_examples=50)
@given(sp_networks())
def test_series_parallel_matches_mna(net):
    trace = reduce_network(net, strategy="series_parallel")
    assert not trace.irreducible
    ref = net.impedance_mna()
    assert (trace.final.num * ref.den - ref.num * trace.final.den).is_zero()
    assert trace.replay(net) == trace.final


BRIDGES = {
    "wheatstone": """
R1 a c 1
R2 a d 2
R3 c b 3
R4 d b 4
R5 c d 5
.terminals a b
""",
    "reactive_bridge": """
L1 a c 2*s
C1 a d 1/(3*s)
R1 c b 1
L2 d b s
R2 c d 7/2
.terminals a b
""",
    "double_bridge": """
R1 a c 1
R2 a d 2
R3 c m 3
R4 d m 4
R5 c d 5
R6 m e 1
R7 m f 3
R8 e b 2
R9 f b 1
R10 e f 1/2
.terminals a b
""",
    "wheel": """
R1 h a 1
R2 h x 2
R3 h b 3
R4 h y 4
R5 a x 1
R6 x b 2
R7 b y 1
R8 y a 3
.terminals a b
""",
    "grid": """
R1 n1 n2 1
R2 n2 n3 2
R3 n4 n5 3
R4 n5 n6 1
R5 n7 n8 2
R6 n8 n9 1
R7 n1 n4 1
R8 n4 n7 2
R9 n2 n5 1
R10 n5 n8 3
R11 n3 n6 1
R12 n6 n9 2
.terminals n1 n9
""",
}


@pytest.mark.parametrize("name", sorted(BRIDGES))
def test_delta_wye_networks_match_mna(name):
    net = parse_network(BRIDGES[name])
    assert reduce_network(net, strategy="series_parallel").irreducible
    trace = reduce_network(net)
    assert not trace.irreducible, name
    ref = net.impedance_mna()
    assert (trace.final.num * ref.den - ref.num * trace.final.den).is_zero()
    assert trace.replay(net) == trace.final
    assert any(s.kind in ("delta_wye", "wye_delta") for s in trace.steps)


def test_bridge_with_step_checks(data_dir):
    net = parse_network((data_dir / "networks/bridge.net").read_text())
    trace = reduce_network(net, check=True)
    assert trace.final == net.impedance_mna()


def test_symbolic_series_equation():
    net = parse_network("Z1 a m R1\nZ2 m b R2\n.terminals a b\n")
    trace = reduce_network(net)
    assert trace.steps[0].kind == "series"
    lhs, rhs = trace.steps[0].equations[0]
    assert lhs not in ("Z1", "Z2")
    assert parse_rational(rhs) == parse_rational("Z1 + Z2")
    assert trace.final == parse_rational("R1 + R2")


def test_symbolic_parallel():
    net = parse_network("Z1 a b R1\nZ2 a b R2\n.terminals a b\n")
    assert reduce_network(net).final == parse_rational("R1*R2/(R1 + R2)")


def test_irreducible_budget():
    net = parse_network(BRIDGES["wheatstone"])
    trace = reduce_network(net, max_transforms=0)
    assert trace.irreducible and trace.remainder is not None
    assert "irreducible_remainder" in trace.to_json()


def test_network_validation():
    with pytest.raises(ValueError):
        parse_network("R1 a b 1\n")
    with pytest.raises(ValueError):
        parse_network("R1 a b 1\n.terminals a a\n")
    with pytest.raises(ValueError):
        reduce_network(parse_network("R1 a b 1\nR2 c d 1\n.terminals a b\n"))
