import itertools
import math

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from circalg.algebra.parse import parse_poly as P
from circalg.algebra.poly import MultiPoly
from circalg.algebra.ratfunc import parse_rational
from circalg.netlist.mna import SingularCircuit, bareiss_det, driving_point_impedance
from circalg.netlist.parse import NetlistError, parse_netlist, parse_value
from circalg.netlist.tf import TransferFunction, bode_samples, derive_transfer_function, poles_zeros, substitute_values


def tf_of(text):
    return derive_transfer_function(parse_netlist(text))


def leibniz(m):
    n = len(m)
    total = MultiPoly()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = MultiPoly.const(1)
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = total + (term if inv % 2 == 0 else -term)
    return total


entries = st.one_of(st.integers(-4, 4).map(MultiPoly.const), st.sampled_from([P("x"), P("y"), P("x - y"), P("2*x*y + 1")]))


@settings(max_examples=50)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_leibniz(m):
    assert bareiss_det(m) == leibniz(m)


def test_divider():
    tf = tf_of("V1 in 0 input\nR1 in out R1\nR2 out 0 R2\n.out out\n")
    assert tf == TransferFunction(P("R2"), P("R1 + R2"))


def test_rc_lowpass_canonical_form(data_dir):
    tf = derive_transfer_function(parse_netlist((data_dir / "netlists/rc_lowpass.cir").read_text()))
    assert [str(c) for c in tf.num_coeffs()] == ["1"]
    assert [str(c) for c in tf.den_coeffs()] == ["1", "C*R"]


def test_vcvs_follower():
    tf = tf_of("V1 in 0 input\nR1 in a R\nC1 a 0 C\nE1 out 0 a 0 K\nR2 out 0 1k\n.out out\n")
    assert tf == TransferFunction(P("K"), P("C*R*s + 1"))


def test_si_suffixes_exact():
    assert parse_value("10n").constant_value() == mpq(1, 10**8)
    assert parse_value("35u").constant_value() == mpq(35, 10**6)
    assert parse_value("310k").constant_value() == 310000
    assert parse_value("2.5M").constant_value() == 2500000


@pytest.mark.parametrize(
    "text, line",
    [
        ("V1 in 0 input\nR1 in out\n.out out\n", 2),
        ("V1 in 0 input\nX1 in out 1\n.out out\n", 2),
        ("V1 in 0 input\nR1 in out 1\nR1 out 0 2\n.out out\n", 3),
        ("V1 in 0 input\nR1 in out 1\nR2 out 0 1$\n.out out\n", 3),
        ("V1 in 0 input\nR1 in out 1\nR2 out 0 2\nR3 out dangling 5\n.out out\n", 4),
    ],
)
def test_errors_report_line(text, line):
    with pytest.raises(NetlistError) as exc:
        parse_netlist(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_missing_ground():
    with pytest.raises(NetlistError, match="ground"):
        parse_netlist("V1 a b input\nR1 a b 1\n")


def test_singular_circuit():
    # two ideal sources in parallel with different values
    with pytest.raises(SingularCircuit):
        tf_of("V1 in 0 input\nV2 in 0 1\nR1 in out 1\nR2 out 0 1\n.out out\n")


def test_driving_point_impedance_series_parallel():
    from circalg.netlist.parse import Element

    els = [
        Element("Z1", "Z", ("a", "m"), parse_rational("R1")),
        Element("Z2", "Z", ("m", "b"), parse_rational("R2")),
        Element("Z3", "Z", ("a", "b"), parse_rational("1/(C*s)")),
    ]
    z = driving_point_impedance(els, "a", "b")
    assert z == parse_rational("(R1 + R2)/(1 + C*s*(R1 + R2))")


def test_poles_zeros_exact_and_refined():
    tf = TransferFunction(P("s - 1"), P("s^2 + 3*s + 2"))
    poles, zeros, info = poles_zeros(tf)
    assert sorted(p.lo for p in poles) == [-2, -1]
    assert all(p.exact for p in poles)
    assert zeros[0].lo == 1 and info["complex_poles"] == 0
    tf2 = TransferFunction(P("1"), P("s^2 - 2"))
    poles, _, _ = poles_zeros(tf2, eps=mpq(1, 10**25))
    assert all(p.width < mpq(1, 10**25) for p in poles)


def test_bode_rc_corner():
    tf = TransferFunction(P("1"), P("s + 1"))
    fc = 1 / (2 * math.pi)
    rows = bode_samples(tf, fc, fc * 10, points_per_decade=10)
    assert rows[0].mag_db == pytest.approx(-10 * math.log10(2), abs=1e-9)
    assert rows[0].phase_deg == pytest.approx(-45, abs=1e-9)
    assert rows[-1].mag_db < rows[0].mag_db


def test_substitute_values_renormalizes():
    tf = TransferFunction(P("R2"), P("R1 + R2"))
    out = substitute_values(tf, {"R1": MultiPoly.const(mpq(1, 2)), "R2": MultiPoly.const(mpq(1, 3))})
    assert [str(c) for c in out.num_coeffs()] == ["2"] and [str(c) for c in out.den_coeffs()] == ["5"]


def test_json_round_trip():
    tf = TransferFunction(P("K"), P("1 + R*C*s + L*C*s^2"))
    assert TransferFunction.from_json(tf.to_json()) == tf
