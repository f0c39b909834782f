import pytest

from momenta.exactalg import (DenominatorZero, Poly, PoleAtZero, Rat, RatFunc,
                              TruncSeries, exact_div, poly_series, rat,
                              series_compose)

V = ("g", "m2")


def P(c):
    return Poly.const(V, c)


def test_rat_parsing():
    assert rat("1/4") == Rat(1, 4)
    assert rat("-3") == -3
    assert rat(2, 6) == Rat(1, 3)
    with pytest.raises(TypeError):
        rat(0.5)


def test_poly_arithmetic_and_evaluate():
    g, m2 = Poly.gens(V)
    p = (g + m2) * (g - m2) + m2 * m2
    assert p == g * g
    q = 4 * g * m2 ** 2 - m2 + 1
    assert q.evaluate({"g": rat(1, 2), "m2": 3}) == 18 - 3 + 1
    assert q.degree() == 3
    assert q.degree_in("m2") == 2
    assert str(q) == "4*g*m2^2 - m2 + 1"


def test_poly_leading_and_content():
    g, m2 = Poly.gens(V)
    p = 6 * g * m2 - 4 * m2
    assert p.leading() == ((1, 1), 6)
    assert p.content() == 2
    assert P(0).is_zero()
    assert (p - p).is_zero()


def test_exact_div():
    g, m2 = Poly.gens(V)
    a = (g + m2) ** 3
    b = (g + m2) ** 2
    assert exact_div(a, b) == g + m2
    assert exact_div(a, g) is None
    with pytest.raises(ZeroDivisionError):
        exact_div(a, P(0))


def test_ratfunc_normalization():
    g, m2 = Poly.gens(V)
    f = RatFunc(2 * m2 - 2, -4 * g)
    # Scalar multiples of the same quotient share one normal form, with a
    # positive leading denominator coefficient.
    assert f.den.leading()[1] > 0
    assert f.num == 1 - m2 and f.den == 2 * g
    g2 = RatFunc(m2 - 1, -2 * g)
    assert g2.num == f.num and g2.den == f.den
    # Common factors cancel exactly.
    assert RatFunc((g + m2) * m2, (g + m2) * g) == RatFunc(m2, g)
    assert RatFunc(g * m2, g) == RatFunc(m2)


def test_ratfunc_arithmetic_and_evaluate():
    g, m2 = Poly.gens(V)
    f = RatFunc(1 - m2, 4 * g)
    h = f + RatFunc(m2, 4 * g)
    assert h == RatFunc(P(1), 4 * g)
    assert (f * RatFunc(4 * g)) == RatFunc(1 - m2)
    assert f.evaluate({"g": rat(1, 4), "m2": rat(1, 2)}) == rat(1, 2)
    with pytest.raises(DenominatorZero):
        f.evaluate({"g": 0, "m2": 1})
    with pytest.raises(ZeroDivisionError):
        f / RatFunc(P(0))


def test_ratfunc_text_form():
    g, m2 = Poly.gens(V)
    assert str(RatFunc(-m2, 3 * g)) == "(-m2)/(3*g)"
    assert str(RatFunc(m2)) == "m2"


def test_series_basics():
    s = TruncSeries.g(5)
    geom = TruncSeries.const(1, 5).divide(1 - s)
    assert geom.coeffs == (1, 1, 1, 1, 1, 1)
    assert (s * s).valuation() == 2
    assert s.integrate().coeffs == (0, 0, rat(1, 2), 0, 0, 0)
    assert TruncSeries.const(0, 3).valuation() is None


def test_series_division_strips_matching_valuation():
    g = TruncSeries.g(6)
    num = g * g * TruncSeries([1, 1, 0, 0, 0, 0, 0])
    den = g * g
    q = num.divide(den)
    assert q.order == 4
    assert q.coeffs == (1, 1, 0, 0, 0)
    with pytest.raises(PoleAtZero):
        g.divide(g * g)


def test_poly_series_substitution():
    g, m2 = Poly.gens(V)
    p = 4 * g * m2 ** 2 - m2 + 1
    sub = {"g": TruncSeries.g(3), "m2": TruncSeries([1, -4, 36, -432])}
    out = poly_series(p, sub, 3)
    direct = (4 * TruncSeries.g(3) * sub["m2"] * sub["m2"]
              - sub["m2"] + TruncSeries.const(1, 3))
    assert out == direct


def test_series_compose_cancels_removable_pole():
    g, m2 = Poly.gens(V)
    f = RatFunc(1 - m2, 4 * g)
    # m2 = 1 - 4g + 36g^2 - 432g^3: numerator vanishes at g = 0 and the
    # quotient is finite there.
    s = TruncSeries([1, -4, 36, -432])
    out = series_compose(f, {"m2": s}, 2)
    assert out.coeffs == (1, -9, 108)
    with pytest.raises(PoleAtZero):
        series_compose(RatFunc(P(1), 4 * g), {"m2": s}, 2)


def test_series_compose_order_bookkeeping():
    g, m2 = Poly.gens(V)
    f = RatFunc(1 - m2, 4 * g)
    s = TruncSeries([1, -4, 36, -432])
    with pytest.raises(ValueError):
        series_compose(f, {"m2": s}, 3)
    # Without substituted data the g variable extends as needed.
    h = RatFunc(Poly.var(V, "g") ** 2, Poly.var(V, "g"))
    assert series_compose(h, {}, 4) == TruncSeries.g(4)
