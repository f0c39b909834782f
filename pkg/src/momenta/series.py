"""Exact power-series solution of the loop equations at g = 0.

Every moment of a model with potential (1/2) sum H_i^2 + g V is a formal
power series in g whose constant term is the corresponding mixed moment of
independent GUE matrices (a count of non-crossing same-letter pairings).
Higher coefficients follow from the insertion equations one order at a
time: the equation produced by inserting w and differentiating with
respect to the last letter of a word W isolates m_W with coefficient -1,
expresses its order-k coefficient through strictly shorter words at order
k and arbitrary words at order k - 1, and therefore admits a triangular
solve with no simultaneous linear system.

The free energy enters through its g-derivative, a fixed combination of
potential-word moments; integrating term by term with constant 0 gives the
g-dependent part of the planar free energy.
"""

from gmpy2 import mpq

from .exactalg import TruncSeries, poly_series
from .sde import derive_sde, generate_system
from .words import Word, basis, canonicalize


class UnderdeterminedAtOrder(RuntimeError):
    """Raised when a requested coefficient needs a word longer than the
    configured length cap, so the triangular solve cannot proceed."""

    def __init__(self, word, order, max_len):
        super().__init__(
            "m_%s at order %d needs words longer than max_len=%d"
            % (word, order, max_len))
        self.word = word
        self.order = order
        self.max_len = max_len


def catalan(k):
    """Number of non-crossing pairings of 2k points on a circle."""
    out = mpq(1)
    for i in range(1, k + 1):
        out = out * 2 * (2 * i - 1) / (i + 1)
    return out


_PAIRING_COUNTS = {}


def _noncrossing(seq):
    if not seq:
        return mpq(1)
    hit = _PAIRING_COUNTS.get(seq)
    if hit is not None:
        return hit
    total = mpq(0)
    for j in range(1, len(seq), 2):
        if seq[j] == seq[0]:
            total += _noncrossing(seq[1:j]) * _noncrossing(seq[j + 1:])
    if len(_PAIRING_COUNTS) < 1 << 18:
        _PAIRING_COUNTS[seq] = total
    return total


def gue_mixed_moment(w):
    """Number of non-crossing pairings of the word's positions that pair
    equal letters: the g = 0 limit of the moment m_w.

    Words of odd length have no pairings at all, and a word in a single
    letter gives the Catalan numbers.
    """
    return _noncrossing(tuple(w))


class SeriesTable:
    """Moment series of a model about g = 0, computed on demand.

    Coefficients are memoized per cyclic class; ``moments`` holds the
    report set materialized by expand_moments and ``free_energy`` is
    filled in by expand_free_energy.
    """

    def __init__(self, model, K=6, max_len=None):
        if K < 0:
            raise ValueError("truncation order must be nonnegative")
        self.model = model
        self.K = K
        if max_len is None:
            longest = max((len(t.word) for t in model.terms), default=2)
            max_len = longest * max(K, 1) + 2
        self.max_len = max_len
        self.moments = {}
        self.free_energy = None
        self._rows = {}
        self._equations = {}

    def coefficient(self, w, k):
        """Exact coefficient of g^k in the series of m_w."""
        rep, sign, zero = self.model.orbit_representative(w)
        if zero:
            return mpq(0)
        val = self._rep_coefficient(rep, k)
        return val if sign == 1 else -val

    def series(self, w, order=None):
        """TruncSeries of m_w, order K unless overridden."""
        K = self.K if order is None else order
        return TruncSeries([self.coefficient(w, k) for k in range(K + 1)])

    def _rep_coefficient(self, rep, k):
        if not rep:
            return mpq(1 if k == 0 else 0)
        row = self._rows.setdefault(rep, {})
        hit = row.get(k)
        if hit is not None:
            return hit
        if k == 0:
            val = gue_mixed_moment(rep)
        else:
            if len(rep) > self.max_len:
                raise UnderdeterminedAtOrder(rep, k, self.max_len)
            val = mpq(0)
            for coeff, gpow, factors in self._equation(rep):
                j = k - gpow
                if j >= 0:
                    val += coeff * self._factor_coefficient(factors, j)
        row[k] = val
        return val

    def _factor_coefficient(self, factors, j):
        if not factors:
            return mpq(1 if j == 0 else 0)
        if len(factors) == 1:
            return self.coefficient(factors[0], j)
        u, v = factors
        total = mpq(0)
        for i in range(j + 1):
            a = self.coefficient(u, i)
            if a:
                total += a * self.coefficient(v, j - i)
        return total

    def _equation(self, rep):
        """Insertion equation solved for m_rep: the terms remaining after
        removing the -m_rep produced by the Gaussian part."""
        hit = self._equations.get(rep)
        if hit is not None:
            return hit
        spelled = rep.word
        eq = derive_sde(self.model, spelled[-1], Word(spelled[:-1]))
        unknown = None
        rest = []
        for t in eq.terms:
            if t.gpow == 0 and t.factors == (rep,):
                unknown = t.coeff
            else:
                rest.append((t.coeff, t.gpow, t.factors))
        assert unknown == -1, "insertion did not isolate m_%s" % rep
        out = tuple(rest)
        self._equations[rep] = out
        return out


def expand_moments(model, K=6, max_len=None, words=()):
    """Series solution of the model's moments to order K.

    The report set covers every cyclic class up to the longest potential
    or generator word (plus any extra ``words``); coefficients for other
    classes remain available through SeriesTable.coefficient.
    """
    table = SeriesTable(model, K, max_len)
    report_len = max(
        [len(t.word) for t in model.terms]
        + [len(gw) for gw in model.generators] + [2])
    classes = []
    seen = set()
    for w in basis(model.m, report_len):
        c = canonicalize(w)
        if len(c) and c not in seen:
            seen.add(c)
            classes.append(c)
    for w in words:
        c = canonicalize(Word.parse(w) if isinstance(w, str) else w)
        if len(c) and c not in seen:
            seen.add(c)
            classes.append(c)
    for c in classes:
        table.moments[c] = table.series(c)
    return table


def expand_free_energy(table):
    """g-dependent part of the planar free energy, to the table's order.

    The g-derivative of the free energy is -sum_V c_V m_V over the
    potential terms; composing with the moment series and integrating
    term by term (constant of integration 0) gives the expansion.
    """
    K = table.K
    fprime = TruncSeries.const(0, K)
    for t in table.model.terms:
        fprime = fprime - t.coeff * table.series(t.word, K)
    out = fprime.integrate()
    table.free_energy = out
    return out


def verify_series_round_trip(table, max_len=None):
    """Substitute the moment series into every insertion equation with
    |w| <= max_len and check that each residual vanishes identically
    through the table's truncation order.

    Returns the number of equations checked.  Because the series are
    produced by solving these equations one order at a time, a nonzero
    residual can only mean an internal inconsistency, which makes this
    the ground-truth test when a quoted value and a computed value
    disagree.
    """
    model = table.model
    if max_len is None:
        max_len = max((len(t.word) for t in model.terms), default=2)
    checked = 0
    for eq in generate_system(model, max_len):
        residual = TruncSeries.const(0, table.K)
        for t in eq.terms:
            if t.gpow > table.K:
                continue
            prod = TruncSeries.const(t.coeff, table.K)
            for f in t.factors:
                prod = prod * table.series(Word(f.word), table.K)
            for _ in range(t.gpow):
                prod = prod * TruncSeries.g(table.K)
            residual = residual + prod
        assert residual.is_zero(), (
            "nonzero residual for insertion (%s, %s)" % (eq.p, eq.w))
        checked += 1
    return checked


def order_of_vanishing(table, w, order=None):
    """Index of the first nonzero series coefficient of m_w.

    Returns an integer when a nonzero coefficient appears within the
    truncation order, and the string ">= <order+1>" when the series is
    zero to that order.
    """
    s = table.series(w, order)
    v = s.valuation()
    if v is None:
        return ">= %d" % (s.order + 1)
    return v


def lhopital_m2_coefficients(table, depth=3):
    """Taylor coefficients c_1..c_depth of m_2 from closed forms alone.

    Each even closed form m_{2k} = num/(c g^(k-1)) has a removable
    singularity at g = 0 whose limit must equal the GUE value; applying
    L'Hopital's rule k-1 times turns that into the statement that the
    g^(k-1) Taylor coefficient of num(g, m_2(g)) equals catalan(k) * c,
    which is linear in the next unknown coefficient of m_2.  This is the
    route that needs no order-by-order solve, used as a cross-check.
    """
    coeffs = [mpq(1)]
    for k in range(2, depth + 2):
        f = table.lookup(Word([0] * (2 * k)))
        den_terms = f.den.terms
        assert len(den_terms) == 1, "closed-form denominator is not monomial"
        (exps, scale), = den_terms.items()
        assert dict(zip(f.den.vars, exps)) == {"g": k - 1, "m2": 0}

        def num_coeff(x):
            sub = {"g": TruncSeries.g(k - 1),
                   "m2": TruncSeries(coeffs + [x])}
            return poly_series(f.num, sub, k - 1)[k - 1]

        base = num_coeff(mpq(0))
        slope = num_coeff(mpq(1)) - base
        assert slope != 0, "limit condition does not involve the new order"
        coeffs.append((catalan(k) * scale - base) / slope)
    return coeffs[1:]
