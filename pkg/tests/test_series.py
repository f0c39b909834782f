"""Tests for the exact power-series solver.

Each recorded series is checked against the engine coefficient by
coefficient. Where a recorded value disagrees, the adjudication rule is
the round-trip residual: the expanded series satisfy every insertion
equation identically (test_round_trip_residuals_vanish), so the tests
pin the engine value and additionally show the recorded one violating
an independent identity it should satisfy (the free-energy derivative
relation, a parity argument, or an exact relabeling that explains how
the recorded line arose).
"""

import pytest
from gmpy2 import mpq

from momenta.exactalg import TruncSeries, series_compose
from momenta.model import load_preset
from momenta.series import (SeriesTable, UnderdeterminedAtOrder, catalan,
                            expand_free_energy, expand_moments,
                            gue_mixed_moment, lhopital_m2_coefficients,
                            order_of_vanishing, verify_series_round_trip)
from momenta.words import Word, canonicalize

from reference_tables import (AB6_PARTIAL, SERIES, THEOREM_WORDS,
                              parse_poly, series_coeffs)

_tables = {}


def series_table(name, K=6):
    """Per-module cache of expanded tables with free energy filled in."""
    key = (name, K)
    if key not in _tables:
        t = expand_moments(load_preset(name), K=K)
        expand_free_energy(t)
        _tables[key] = t
    return _tables[key]


def recorded(name, which):
    return TruncSeries(series_coeffs(SERIES[name][which]))


def alternated(s):
    """The series with g replaced by -g."""
    return TruncSeries([(-1) ** k * c for k, c in enumerate(s.coeffs)])


def test_gue_moments_count_noncrossing_pairings():
    """Base coefficients are non-crossing pairings: Catalan numbers for a
    single letter, zero for odd words and for alternating mixed words."""
    assert gue_mixed_moment(Word.parse("AA")) == 1
    assert gue_mixed_moment(Word.parse("AAAA")) == 2
    assert gue_mixed_moment(Word.parse("AAAAAA")) == 5
    assert gue_mixed_moment(Word.parse("AABB")) == 1
    assert gue_mixed_moment(Word.parse("ABAB")) == 0
    assert gue_mixed_moment(Word.parse("ABC")) == 0
    assert gue_mixed_moment(Word.parse("AAA")) == 0
    assert gue_mixed_moment(Word([])) == 1
    for k in range(7):
        assert gue_mixed_moment(Word([0] * (2 * k))) == catalan(k)


def test_base_order_needs_no_length_cap():
    """Order-0 coefficients come from the pairing count directly, so they
    are available even for words far beyond the cap."""
    st = SeriesTable(load_preset("ggg"), K=1, max_len=4)
    assert st.coefficient(Word([0] * 20), 0) == catalan(10)


@pytest.mark.parametrize("name,max_len", [
    ("ggg", 4), ("gmgg", 4), ("ggmg", 4), ("mggg", 4),
    ("3matrix", 3), ("quartic", 4), ("gaussian1", 2),
])
def test_round_trip_residuals_vanish(name, max_len):
    """Substituting the series into every generated equation leaves zero
    residual through the truncation order. This is the ground truth the
    recorded-value adjudications below lean on."""
    st = series_table(name)
    assert verify_series_round_trip(st, max_len=max_len) > 0


def test_quartic_series_matches_the_algebraic_root():
    """For the one-matrix quartic model, m2 = (4a - a^2)/3 where a solves
    a = 1 - 3 g a^2; the recursion for a gives an independent expansion."""
    st = series_table("quartic", K=8)
    a = [mpq(1)]
    for k in range(1, 9):
        a.append(-3 * sum(a[i] * a[k - 1 - i] for i in range(k)))
    m2 = [(4 * a[k] - sum(a[i] * a[k - i] for i in range(k + 1))) / 3
          for k in range(9)]
    assert st.series(Word.parse("AA")).coeffs == tuple(m2)
    assert m2[:4] == [1, -2, 9, -54]


def test_recorded_symmetric_model_series():
    """m2 and the free energy of the fully symmetric quartic model match
    the recorded coefficients exactly, and the recorded derivative list
    is consistent with the recorded m2."""
    st = series_table("ggg")
    m2 = series_coeffs(SERIES["ggg"]["m2"])
    assert st.series(Word.parse("AA"), 5) == TruncSeries(m2)
    assert st.free_energy.truncate(5) == recorded("ggg", "F")
    dm2 = series_coeffs(SERIES["ggg"]["dm2"])
    assert dm2 == [(k + 1) * m2[k + 1] for k in range(5)]


def test_interaction_sign_flip_negates_only_the_alternating_class():
    """Flipping the sign of the alternating quartic term negates m_ABAB
    and leaves every other moment class and the free energy unchanged."""
    ggg = series_table("ggg")
    gmgg = series_table("gmgg")
    flipped = []
    for c, s in ggg.moments.items():
        other = gmgg.series(Word(c.word))
        if s == other:
            continue
        assert s == -other, "class %s neither equal nor negated" % c
        flipped.append(str(c))
    assert flipped == ["ABAB"]
    assert ggg.free_energy == gmgg.free_energy


def test_recorded_alternating_flip_series():
    """The model with the negated AABB term: recorded m2 and m4 match the
    engine; the recorded free energy does not, and it already contradicts
    the recorded m2 through F' = (m2 - 1)/(2g)."""
    st = series_table("ggmg")
    rec_m2 = recorded("ggmg", "m2")
    rec_m4 = recorded("ggmg", "m4")
    assert st.series(Word.parse("AA"), 4) == rec_m2
    assert st.series(Word.parse("AAAA"), 3) == rec_m4
    assert st.free_energy.coeffs == (0, 0, 1, 0, 12, 0, 288)

    fprime = (st.series(Word.parse("AA")) - 1).divide(2 * TruncSeries.g(6))
    assert st.free_energy.truncate(fprime.order) == fprime.integrate()

    rec_f = recorded("ggmg", "F")
    implied = (rec_m2 - 1).divide(2 * TruncSeries.g(4)).integrate()
    assert implied == st.free_energy.truncate(implied.order)
    assert implied != rec_f.truncate(implied.order)


def test_recorded_negated_quartic_series():
    """The model with negated single-letter quartic terms: the recorded
    m2/m4/F lines disagree with the engine beyond first order, and the
    recorded m2 and F contradict each other through the F' identity.
    The g -> -g image of the AABB-flipped model reproduces every class."""
    st = series_table("mggg")
    assert st.series(Word.parse("AA")).coeffs == (1, 0, 4, 0, 96, 0, 3456)
    assert st.series(Word.parse("AAAA")).coeffs == (
        2, 1, 20, 24, 576, 864, 22656)
    assert st.free_energy.coeffs == (0, 0, 1, 0, 12, 0, 288)

    rec_m2 = recorded("mggg", "m2")
    rec_m4 = recorded("mggg", "m4")
    rec_f = recorded("mggg", "F")
    eng_m2 = st.series(Word.parse("AA"), 4)
    eng_m4 = st.series(Word.parse("AAAA"), 3)
    assert eng_m2 != rec_m2
    assert eng_m4 != rec_m4
    assert eng_m4.coeffs[:2] == rec_m4.coeffs[:2]
    implied = (rec_m2 - 1).divide(2 * TruncSeries.g(4)).integrate()
    assert implied != rec_f.truncate(implied.order)

    fprime = (st.series(Word.parse("AA")) - 1).divide(2 * TruncSeries.g(6))
    assert st.free_energy.truncate(fprime.order) == fprime.integrate()

    ggmg = series_table("ggmg")
    for c, s in st.moments.items():
        if str(c) == "ABAB":
            continue
        assert s == alternated(ggmg.series(Word(c.word))), c
    assert st.free_energy == alternated(ggmg.free_energy)


def test_three_matrix_series_and_the_relabeled_recording():
    """Engine values for the cubic three-matrix model, the parity rule
    m_w(-g) = (-1)^len(w) m_w(g), and the exact explanation of the
    recorded lines: recorded m2 is 1 + m_A, recorded m4 is 1 + m_AA, and
    recorded F integrates the mislabeled m2, so all three violate the
    parity that any even-length word obeys."""
    st = series_table("3matrix")
    assert st.series(Word.parse("A")).coeffs == (0, -1, 0, -12, 0, -288, 0)
    assert st.series(Word.parse("AA")).coeffs == (1, 0, 6, 0, 114, 0, 3240)
    assert st.series(Word.parse("AB")).coeffs == (0, 0, 3, 0, 87, 0, 2916)
    assert st.series(Word.parse("ABC")).coeffs == (0, -1, 0, -23, 0, -729, 0)
    assert st.free_energy.coeffs == (0, 0, 3, 0, mpq(57, 2), 0, 540)

    for c, s in st.moments.items():
        for k, x in enumerate(s.coeffs):
            assert not (x and (k + len(c)) % 2), (
                "parity violated by %s at order %d" % (c, k))

    rec_m2 = recorded("3matrix", "m2")
    rec_m4 = recorded("3matrix", "m4")
    rec_f = recorded("3matrix", "F")
    assert rec_m2 == st.series(Word.parse("A")) + 1
    assert rec_m4 == st.series(Word.parse("AA"), 5) + 1
    implied = (rec_m2 - 1).divide(TruncSeries.g(6)).integrate()
    assert rec_f.truncate(implied.order) == implied
    assert any(c for k, c in enumerate(rec_m2.coeffs) if k % 2)

    fprime = (st.series(Word.parse("AA")) - 1).divide(TruncSeries.g(6))
    assert st.free_energy.truncate(fprime.order) == fprime.integrate()


@pytest.mark.parametrize("name,word,degree,bound", THEOREM_WORDS)
def test_vanishing_orders_of_alternating_words(name, word, degree, bound):
    """Moments of words with odd-length single-letter blocks vanish to the
    order predicted by ceil(len/degree), with equality for all six."""
    assert bound == -(-len(word) // degree)
    table = SeriesTable(load_preset(name), K=bound, max_len=20)
    assert order_of_vanishing(table, Word.parse(word)) == bound


def test_vanishing_order_reports_a_lower_bound_when_truncated():
    st = SeriesTable(load_preset("ggg"), K=2, max_len=20)
    w = Word.parse("ABABABABABAB")
    assert order_of_vanishing(st, w) == ">= 3"
    st3 = series_table("3matrix")
    assert order_of_vanishing(st3, Word.parse("AB"), 1) == ">= 2"
    assert order_of_vanishing(st3, Word.parse("AB")) == 2


def test_lhopital_coefficients_agree_with_the_expansion(table):
    """Removable singularities of the closed forms at g = 0 reproduce the
    first three series coefficients of m2 without an order-by-order solve."""
    tab = table("ggg", 8)
    coeffs = lhopital_m2_coefficients(tab, depth=3)
    assert coeffs == [-4, 36, -432]
    st = series_table("ggg")
    assert coeffs == [st.coefficient(Word.parse("AA"), k) for k in (1, 2, 3)]


def test_closed_forms_and_series_expansions_agree(table):
    """Composing every solved closed form with the m2 series reproduces the
    direct expansion of that moment, tying the two solvers together."""
    tab = table("ggg", 8)
    st = series_table("ggg")
    m2 = st.series(Word.parse("AA"), 8)
    checked = 0
    for w, f in tab.items():
        assert series_compose(f, {"m2": m2}, 4) == st.series(Word(w.word), 4)
        checked += 1
    assert checked == 20


def test_completed_twelve_letter_formula_matches_the_expansion():
    """The closed form for the alternating twelve-letter moment, with the
    two monomials restored at its corrupted spot (+100 g^2 - m2), agrees
    with the direct series expansion through g^6."""
    from momenta.exactalg import Poly, RatFunc
    V = ("g", "m2")
    num = parse_poly(AB6_PARTIAL["num"], V, {"2": "m2"})
    num = num + 100 * Poly.var(V, "g") ** 2 - Poly.var(V, "m2")
    cand = RatFunc(num, parse_poly(AB6_PARTIAL["den"], V, {"2": "m2"}))
    st = expand_moments(load_preset("ggg"), K=11)
    m2 = st.series(Word.parse("AA"), 11)
    direct = st.series(Word.parse(AB6_PARTIAL["word"]), 6)
    assert series_compose(cand, {"m2": m2}, 6) == direct
    assert direct.coeffs == (0, 0, 0, -22, 1464, -61233, 2074192)


def test_length_cap_raises_with_context():
    st = SeriesTable(load_preset("ggg"), K=1, max_len=6)
    with pytest.raises(UnderdeterminedAtOrder) as err:
        st.coefficient(Word([0] * 8), 1)
    assert str(err.value.word) == "AAAAAAAA"
    assert err.value.order == 1
    assert err.value.max_len == 6
    assert "max_len=6" in str(err.value)


def test_pure_gaussian_model_is_constant_in_g():
    st = expand_moments(load_preset("gaussian1"), K=4)
    assert st.series(Word([0] * 6)).coeffs == (5, 0, 0, 0, 0)
    assert st.series(Word([0] * 3)).is_zero()
    assert expand_free_energy(st).is_zero()


def test_report_set_and_free_energy_field():
    """The report set covers every cyclic class up to the potential length,
    extra words extend it, and free_energy is filled in on demand."""
    st = expand_moments(load_preset("ggg"), K=2)
    assert len(st.moments) == 15
    key = canonicalize(Word.parse("ABAB"))
    assert key in st.moments
    assert st.moments[key] == st.series(Word.parse("ABAB"))
    assert st.free_energy is None
    expand_free_energy(st)
    assert st.free_energy is not None

    wider = expand_moments(load_preset("ggg"), K=2, words=("ABABAB",))
    assert canonicalize(Word.parse("ABABAB")) in wider.moments
    assert len(wider.moments) == 16
