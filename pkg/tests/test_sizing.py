import pytest
from gmpy2 import mpq

from circalg.algebra.parse import parse_poly as P
from circalg.algebra.poly import MultiPoly
from circalg.groebner import buchberger
from circalg.netlist.tf import TransferFunction
from circalg.sizing.census import hurwitz_census
from circalg.sizing.pipeline import PositiveDimensional, SolveOptions, load_design, solve_design
from circalg.sizing.systems import (
    DesignSpec,
    DesignSystem,
    chebyshev_poly,
    coefficient_match,
    feldtkeller_rhs,
    feldtkeller_system,
    pole_placement_system,
)


def test_chebyshev_polynomials():
    assert chebyshev_poly(4, "x") == P("8*x^4 - 8*x^2 + 1")
    assert chebyshev_poly(3, "x") == P("4*x^3 - 3*x")


def test_feldtkeller_rhs_families():
    assert feldtkeller_rhs(4, "butterworth") == P("1 + s^8")
    assert feldtkeller_rhs(4, "chebyshev") == P("1 + 8*s^2 + 40*s^4 + 64*s^6 + 32*s^8")
    assert feldtkeller_rhs(4, "chebyshev_literal") == P("2 - 16*s^2 + 80*s^4 - 128*s^6 + 64*s^8")
    with pytest.raises(ValueError):
        feldtkeller_rhs(4, "elliptic")


def test_feldtkeller_butterworth_equations():
    eqs = feldtkeller_system(["a1", "a2", "a3", "a4"], "butterworth")
    expected = [P("2*a2 - a1^2"), P("a2^2 - 2*a1*a3 + 2*a4"), P("2*a2*a4 - a3^2"), P("a4 - 1")]
    for e, x in zip(eqs, expected):
        assert e == x or e == -x


def test_feldtkeller_second_order_solution():
    # Butterworth n=2: D = 1 + sqrt2 s + s^2
    eqs = feldtkeller_system(["a1", "a2"], "butterworth")
    gb = buchberger(eqs)
    assert P("a1^2 - 2") in gb.polys


def test_coefficient_match_target_mode():
    tf = TransferFunction(P("1"), P("1 + R*C*s"))
    sys_ = coefficient_match(tf, DesignSpec("target", A=[1], B=[1, mpq(1, 1000)]), {"C": mpq(1, 10**6)})
    sol = solve_design(sys_)
    assert len(sol.admissible) == 1
    assert sol.admissible[0].box.values["R"] == 1000


def test_coefficient_match_rejects_degree_overflow():
    tf = TransferFunction(P("1"), P("1 + R*C*s"))
    with pytest.raises(ValueError):
        coefficient_match(tf, DesignSpec("target", A=[1], B=[1, 1, 1]))


def test_design_spec_validation():
    with pytest.raises(ValueError):
        DesignSpec("bessel", 2)
    with pytest.raises(ValueError):
        DesignSpec("butterworth", 0)
    with pytest.raises(ValueError):
        DesignSpec("pole_placement")
    with pytest.raises(ValueError, match="undeclared"):
        DesignSystem([P("x - q")], ["x"])
    with pytest.raises(ValueError):
        SolveOptions(lex_strategy="magic")


def test_pole_placement_rc():
    tf = TransferFunction(P("1"), P("1 + R*C*s")).substitute({"C": mpq(1, 1000)})
    sys_ = pole_placement_system(tf, ["-10"], zero_structure="1")
    assert sys_.unknowns == ["k", "R"]
    res = solve_design(sys_, SolveOptions(positive=["R"]))
    assert [(a.box.values["k"], a.box.values["R"]) for a in res.admissible] == [(10, 100)]


def test_pole_placement_symbolic_poles_are_parameters():
    tf = TransferFunction(P("1"), P("1 + R*C*s"))
    sys_ = pole_placement_system(tf, ["p"], zero_structure="1", unknowns=["k", "R"], parameters=["p", "C"])
    assert sys_.parameters == ["p", "C"]
    with pytest.raises(ValueError, match="bound"):
        solve_design(sys_)


def test_positive_dimensional_reported():
    eqs = [P("R1 + R2 - 3")]
    with pytest.raises(PositiveDimensional, match="freeze"):
        solve_design(DesignSystem(eqs, ["R1", "R2"]))


def test_rejection_reasons():
    # x^2 = 1 with x positive: one admissible, one negative_element
    res = solve_design(DesignSystem([P("x^2 - 1")], ["x"]), SolveOptions(positive=["x"]))
    assert len(res.admissible) == 1
    assert res.rejected[0].reasons == ["negative_element"]
    # x (x - 1) = 0 with x nonzero: trivial_zero
    res = solve_design(DesignSystem([P("x^2 - x")], ["x"]), SolveOptions(nonzero=["x"]))
    assert [r.reasons for r in res.rejected] == [["trivial_zero"]]


def test_hurwitz_filter_second_order():
    # D = 1 + 2R s + 2R^2 s^2 against Butterworth n = 2
    eqs = [P("a1 - 2*R"), P("a2 - R^2*2")] + feldtkeller_system(["a1", "a2"], "butterworth")
    res = solve_design(DesignSystem(eqs, ["a1", "a2", "R"], hurwitz_symbols=["a1", "a2"]), SolveOptions(positive=["R"]))
    assert len(res.admissible) == 1
    assert res.admissible[0].hurwitz_ok
    assert any("non_hurwitz" in r.reasons for r in res.rejected)
    assert res.census.hurwitz_solutions == 1


def test_census_counts_complex_lifts():
    # a = t^2 with t^4 = 1: a = 1 over t = +-1, a = -1 over t = +-i; D = 1 + a s
    gb = buchberger([P("t^4 - 1"), P("a - t^2")])
    c = hurwitz_census(gb, "t", ["a"])
    assert c.solutions == 4 and c.distinct_points == 2
    pts = sorted((float(p.values["a"].mid), p.multiplicity, p.hurwitz) for p in c.points)
    assert pts == [(-1.0, 2, False), (1.0, 2, True)]
    assert c.hurwitz_solutions == 2


def test_bjt_spec_solutions(data_dir):
    system, opts, _ = load_design(data_dir / "specs/bjt_poles.json")
    res = solve_design(system, opts)
    assert len(res.solutions) == 4
    assert len(res.admissible) == 2
    for a in res.admissible:
        assert a.box.values["Rs"] == 0
    reasons = sorted(tuple(r.reasons) for r in res.rejected)
    assert reasons == [("negative_element",), ("trivial_zero",)]
    neg = next(r for r in res.rejected if r.reasons == ["negative_element"])
    assert neg.box.values["Ca"] == mpq(-11, 1034375000000)


def test_result_json_shape(data_dir):
    system, opts, _ = load_design(data_dir / "specs/bjt_poles.json")
    out = solve_design(system, opts).to_json(digits=12, meta=False)
    assert out["counts"] == {"solutions": 4, "admissible": 2, "rejected": 2, "undetermined": 0}
    assert "timing" not in out
    assert out["admissible"][0]["values"]["Rs"]["exact"] == "0"


def test_literal_chebyshev_rhs_excludes_reference_values(data_dir):
    # 30-digit reference design for C = (1, 2, 2, 1): consistent with the normalized
    # right-hand side, inconsistent with 1 + T4(s) T4(-s) taken verbatim
    from circalg.netlist.parse import parse_netlist
    from circalg.netlist.tf import derive_transfer_function
    from circalg.algebra.scalars import parse_scalar
    from circalg.realsolve.interval import Interval, eval_interval

    tf = derive_transfer_function(parse_netlist((data_dir / "netlists/sallen_key4.cir").read_text()))
    frozen = {"K": MultiPoly.const(2), **{f"C{i}": MultiPoly.const(c) for i, c in zip(range(1, 5), (1, 2, 2, 1))}}
    rvals = ["0.263638090854794185461593787592", "0.624164765447879000316525786179",
             "2.645185226758545312744750592839", "3.249013399873649633437777451232"]
    r = mpq(1, 10**28)
    env = {f"R{i}": Interval(parse_scalar(v) - r, parse_scalar(v) + r) for i, v in enumerate(rvals, start=1)}
    D = [eval_interval(c.substitute(frozen), env) for c in tf.den_coeffs()]
    env.update({f"a{i}": D[i] / D[0] for i in range(1, 5)})

    def all_contain_zero(mode):
        sys_ = coefficient_match(tf, DesignSpec(mode, 4, linearize_top=False), frozen)
        return all(eval_interval(e, env).contains_zero() for e in sys_.equations)

    assert all_contain_zero("chebyshev")
    assert not all_contain_zero("chebyshev_literal")
