import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from circalg.algebra.parse import parse_poly as P
from circalg.algebra.poly import MonomialOrder
from circalg.algebra.scalars import QuadExt
from circalg.groebner import buchberger
from circalg.realsolve import univariate as U
from circalg.realsolve.hurwitz import HurwitzUndecidable, hermite_biehler, hurwitz_stable
from circalg.realsolve.interval import Interval, certified_digits, eval_interval, mpq_to_decimal
from circalg.realsolve.triangular import certify_residuals, positivity_filter, solve_triangular

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=6).map(lambda f: mpq(f.numerator, f.denominator))


def from_roots(real_roots, quad_factors=()):
    """Dense coefficients of prod (x - r) * prod (x^2 + b x + c)."""
    p = [mpq(1)]
    for r in real_roots:
        p = U.mul(p, [-r, mpq(1)])
    for b, c in quad_factors:
        p = U.mul(p, [c, b, mpq(1)])
    return p


# irreducible quadratics: b^2 < 4c
complex_pairs = st.tuples(rationals, rationals).filter(lambda bc: bc[0] ** 2 < 4 * bc[1])


@settings(max_examples=100)
@given(st.lists(rationals, max_size=6), st.lists(complex_pairs, max_size=2))
def test_sturm_count_matches_constructed_roots(roots, pairs):
    p = from_roots(roots, pairs)
    assume(U.degree(p) >= 1)
    distinct = sorted(set(roots))
    ivs = U.isolate_real_roots(p)
    assert len(ivs) == len(distinct)
    seq = U.SturmSequence.of(U.squarefree_part(p))
    assert seq.total() == len(distinct)
    for iv, r in zip(sorted(ivs, key=lambda i: i.lo), distinct):
        assert iv.lo <= r <= iv.hi
        assert iv.multiplicity == roots.count(r)
    a, b = mpq(-3), mpq(2)
    assert U.count_roots(p, a, b) == sum(1 for r in distinct if a < r <= b)


@settings(max_examples=100)
@given(st.lists(rationals, max_size=4), st.lists(complex_pairs, max_size=2), st.integers(1, 4))
def test_hurwitz_matches_root_oracle(roots, pairs, scale):
    p = [c * scale for c in from_roots(roots, pairs)]
    assume(U.degree(p) >= 1)
    # stable iff every real root < 0 and every quadratic has b > 0, c > 0
    expected = all(r < 0 for r in roots) and all(b > 0 and c > 0 for b, c in pairs)
    assert hurwitz_stable(p) == expected
    assert hermite_biehler(p) == expected


def test_hurwitz_known_cases():
    assert hurwitz_stable([1, 2, 1])  # (s+1)^2
    assert not hurwitz_stable([1, 0, 1])  # roots on the imaginary axis
    assert not hurwitz_stable([0, 1, 1])  # root at the origin
    bw4 = [1, mpq(26131259, 10**7), mpq(34142136, 10**7), mpq(26131259, 10**7), 1]
    assert hurwitz_stable(bw4)


def test_hurwitz_with_intervals_and_refinement():
    tight = [Interval(1), Interval(mpq(199, 100), mpq(201, 100)), Interval(1)]
    assert hurwitz_stable(tight)
    # coefficient straddles zero: needs refinement, then undecidable without it
    vague = [Interval(1), Interval(mpq(-1, 10), mpq(1, 10)), Interval(1)]
    with pytest.raises(HurwitzUndecidable):
        hurwitz_stable(vague)
    calls = []

    def refine_cb(rnd):
        calls.append(rnd)
        return [Interval(1), Interval(mpq(1, 10**rnd)), Interval(1)]

    assert hurwitz_stable(vague, refine_cb)
    assert calls == [1]


def test_refine_and_exact_rational_root():
    (iv,) = U.isolate_real_roots(P("3*x - 2"))
    assert U.exact_rational_root(iv) == mpq(2, 3)
    sqrt2 = [i for i in U.isolate_real_roots(P("x^2 - 2")) if i.hi > 0][0]
    r = U.refine(sqrt2, mpq(1, 10**30))
    assert r.width < mpq(1, 10**30)
    assert r.lo**2 < 2 < r.hi**2
    assert U.exact_rational_root(sqrt2) is None


def test_isolation_over_quadratic_field():
    r2 = QuadExt.sqrt(2)
    # (x - sqrt2)(x + 1) = x^2 + (1 - sqrt2) x - sqrt2
    p = [-r2, 1 - r2, QuadExt(1)]
    ivs = U.isolate_real_roots(p)
    assert len(ivs) == 2
    pos = [i for i in ivs if i.hi > 0][0]
    r = U.refine(pos, mpq(1, 10**20))
    assert r.lo**2 < 2 < r.hi**2


def test_interval_arithmetic_encloses():
    x = Interval(mpq(1), mpq(2))
    y = Interval(mpq(-1), mpq(3))
    assert (x * y).lo == -2 and (x * y).hi == 6
    assert (x - x).contains_zero()
    assert (x**2).lo == 1
    assert eval_interval(P("a^2 - 2*a*b"), {"a": x, "b": y}).contains(mpq(1) - 2 * mpq(3) / 2)


def test_decimal_rendering():
    assert mpq_to_decimal(mpq(1, 3), 5) == "0.33333"
    assert certified_digits(Interval(mpq(14142, 10**4), mpq(14143, 10**4)), 10).startswith("1.414")


def test_triangular_solve_circle_line():
    gb = buchberger([P("x^2 + y^2 - 1"), P("x - y")], MonomialOrder("lex", ("x", "y")))
    boxes = solve_triangular(gb, "y", ("x", "y"))
    assert len(boxes) == 2
    eqs = [P("x^2 + y^2 - 1"), P("x - y")]
    for b in boxes:
        assert certify_residuals(b, eqs) is not None
        assert b.sign("x") == b.sign("y") != 0
    assert len(positivity_filter(boxes, ["x", "y"])) == 1


def test_triangular_exact_zero_and_rational_roots():
    gb = buchberger([P("y^2 - y"), P("x*y - 3*y"), P("x^2 - 9")], MonomialOrder("lex", ("x", "y")))
    boxes = solve_triangular(gb, "y", ("x", "y"))
    vals = sorted((b.values["x"], b.values["y"]) for b in boxes)
    assert vals == [(-3, 0), (3, 0), (3, 1)]
    assert any(b.is_zero("y") for b in boxes)


def test_free_branch_is_reported():
    # y (x - 1) = 0, y^2 = y: y = 0 leaves x free
    gb = buchberger([P("x*y - y"), P("y^2 - y")], MonomialOrder("lex", ("x", "y")))
    boxes = solve_triangular(gb, "y", ("x", "y"))
    free = [b for b in boxes if b.free]
    assert free and free[0].free == ["x"]
