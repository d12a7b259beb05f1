import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from circalg.algebra.parse import parse_poly as P
from circalg.algebra.poly import MonomialOrder, MultiPoly
from circalg.groebner import (
    Budget,
    GroebnerBudgetExceeded,
    PolySystem,
    buchberger,
    certify,
    eliminate,
    fglm,
    is_zero_dimensional,
    normal_form,
    s_polynomial,
)

LEX_XY = MonomialOrder("lex", ("x", "y"))


def test_circle_and_line():
    gb = buchberger([P("x^2 + y^2 - 1"), P("x - y")], LEX_XY)
    assert gb.polys == [P("2*y^2 - 1"), P("x - y")]
    assert certify(gb)
    assert is_zero_dimensional(gb)


def test_unit_ideal():
    gb = buchberger([P("x*y - 1"), P("x")], LEX_XY)
    assert gb.polys == [MultiPoly.const(1)]


def test_textbook_example_cox_little_oshea():
    # x^3 - 2xy, x^2 y - 2y^2 + x under grlex-like order; reduced basis is {x^2, xy, y^2 - x/2}
    gb = buchberger([P("x^3 - 2*x*y"), P("x^2*y - 2*y^2 + x")], MonomialOrder("grevlex", ("x", "y")))
    assert sorted(map(str, gb.polys)) == sorted(["x^2", "x*y", "2*y^2 - x"])
    assert certify(gb)


def test_reduced_and_primitive_output():
    gb = buchberger([P("6*x^2 - 4*y"), P("3*x*y - 9")], LEX_XY)
    for g in gb.polys:
        c, _ = g.content_primitive(gb.order)
        assert c == 1
        lm = g.leading_monomial(gb.order)
        for h in gb.polys:
            if h is g:
                continue
            # no term of h is divisible by lm(g)
            assert not any(all(dict(m).get(v, 0) >= e for v, e in lm) for m in h.terms)


def test_parameters_rank_lowest():
    sys_ = PolySystem([P("k - a*p"), P("a^2 - p")], ("k", "a"), ("p",))
    gb = buchberger(sys_)
    assert gb.order.priority == ("k", "a", "p")
    assert certify(gb)


def test_undeclared_symbol_rejected():
    with pytest.raises(ValueError, match="undeclared"):
        PolySystem([P("x + q")], ("x",))


def test_budget_pairs_exceeded():
    with pytest.raises(GroebnerBudgetExceeded):
        buchberger([P("x^3 - y^2 + 1"), P("x*y^2 - 3"), P("y^3 - x + 2")], LEX_XY, Budget(max_pairs=2))


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("CIRCALG_BUDGET_PAIRS", "7")
    monkeypatch.setenv("CIRCALG_BUDGET_SECONDS", "1.5")
    b = Budget.from_env()
    assert b.max_pairs == 7 and b.max_seconds == 1.5


def test_eliminate_keeps_last_variables():
    polys = [P("x - t^2"), P("y - t^3")]
    elim = eliminate(polys, ("x", "y"))
    assert elim == [P("x^3 - y^2")] or elim == [P("-x^3 + y^2")]


def test_positive_dimensional_detected():
    gb = buchberger([P("x*y")], LEX_XY)
    assert not is_zero_dimensional(gb)


def test_s_polynomial_and_normal_form():
    f, g = P("x^2*y - 1"), P("x*y^2 - x")
    s = s_polynomial(f, g, LEX_XY)
    assert s == P("y*(x^2*y - 1) - x*(x*y^2 - x)")
    assert normal_form(P("x^2 + y"), [P("x - 1")], LEX_XY) == P("y + 1")


def test_fglm_matches_direct_lex():
    polys = [P("x^2 + y^2 + z^2 - 3"), P("x*y - z"), P("x + y + z - 3")]
    vars_ = ("x", "y", "z")
    direct = buchberger(polys, MonomialOrder("lex", vars_))
    grev = buchberger(polys, MonomialOrder("grevlex", vars_))
    via = fglm(grev, MonomialOrder("lex", vars_))
    assert via.polys == direct.polys
    assert via.stats["quotient_dim"] >= 1
    assert certify(via)


def test_modular_fglm_matches_rational():
    polys = [P("x^2 + y^2 + z^2 - 3"), P("x*y - z"), P("x + y + z - 3")]
    vars_ = ("x", "y", "z")
    grev = buchberger(polys, MonomialOrder("grevlex", vars_))
    a = fglm(grev, MonomialOrder("lex", vars_), method="rational")
    b = fglm(grev, MonomialOrder("lex", vars_), method="modular")
    assert a.polys == b.polys
    assert b.stats["method"] == "modular" and b.stats["primes"] >= 1


def test_rational_reconstruction_and_staircase():
    from circalg.groebner import _quotient_dim, _ratrecon

    m = (2**61 - 1) * (2**31 - 1)
    for q in (mpq(-22, 7), mpq(1, 3**20), mpq(0)):
        a = int(q.numerator) * pow(int(q.denominator), -1, m) % m
        assert _ratrecon(a, m) == q
    # staircase of <x^2, x*y, y^3>: 1, x, y, y^2
    assert _quotient_dim([(2, 0), (1, 1), (0, 3)], 2) == 4


def test_fglm_rejects_positive_dimensional():
    grev = buchberger([P("x*y - 1")], MonomialOrder("grevlex", ("x", "y")))
    with pytest.raises(ValueError):
        fglm(grev, LEX_XY)


def test_bjt_ce_eliminant_factors(data_dir):
    from circalg.cli import read_system

    gb = buchberger(read_system((data_dir / "systems/bjt_eq15.txt").read_text()))
    assert len(gb.polys) == 12
    (g,) = [g for g in gb.polys if not set(g.variables) & {"k", "Rs", "Ca"}]
    lin = P(
        "1182300335490970802500000000000000 + 2591834572818828634150000000*p1 + 2591834572818828634150000000*p2"
        " + 5681810493667293811609*p1*p2 + 1737403713997011459000000000000*p1*p2*Ce"
    )
    quad = P(
        "100852820307500000000000000 + 22384370986950000000*p1 + 22384370986950000000*p2 + 49070938130697*p1*p2"
        " + 67626498450000000000000000000*p1*Ce + 67626498450000000000000000000*p2*Ce"
        " + 163214120034000000000000*p1*p2*Ce + 45346707000000000000000000000000*p1*p2*Ce^2"
    )
    prod = (P("Ce") * lin * quad).primitive()
    assert g.primitive() in (prod, -prod)


small = st.integers(-3, 3)


@st.composite
def systems(draw):
    """Two or three random bivariate polynomials with small coefficients."""
    out = []
    for _ in range(draw(st.integers(2, 3))):
        terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, min_size=1, max_size=4))
        p = MultiPoly({tuple((v, e) for v, e in zip(("x", "y"), ex) if e): c for ex, c in terms.items()})
        if not p.is_zero():
            out.append(p)
    return out


@settings(max_examples=40)
@given(systems(), st.sampled_from(["lex", "grevlex"]))
def test_every_computed_basis_is_certified(polys, kind):
    if not polys:
        return
    gb = buchberger(polys, MonomialOrder(kind, ("x", "y")), Budget(max_pairs=2000))
    assert certify(gb)
    if kind == "grevlex" and is_zero_dimensional(gb):
        lex = MonomialOrder("lex", ("x", "y"))
        assert fglm(gb, lex, method="modular").polys == fglm(gb, lex).polys
    # generators reduce to zero modulo the basis
    for p in polys:
        assert normal_form(p, gb.polys, gb.order).is_zero()
