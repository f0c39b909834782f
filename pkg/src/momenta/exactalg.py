"""Exact arithmetic: rationals, small multivariate polynomials, rational
functions, and truncated power series in g.

Everything here is exact; no floating point. Polynomials carry a fixed,
ordered variable tuple (at most g plus two generator symbols in practice) and
use graded-lexicographic term order for canonical forms.
"""

from gmpy2 import mpq, mpz, gcd


Rat = mpq


def rat(x=0, y=None):
    """Exact rational from int, string ("-3", "1/4"), Fraction, or mpq."""
    if y is not None:
        return mpq(x, y)
    if isinstance(x, float):
        raise TypeError("refusing float -> rational; pass a string or Fraction")
    return mpq(x)


def rat_str(q):
    return str(q)


class DenominatorZero(ArithmeticError):
    """A rational function was evaluated where its denominator vanishes."""


class PoleAtZero(ArithmeticError):
    """A genuine pole at g = 0 survived series division."""


def _coeff_str(c):
    if c.denominator == 1:
        return str(c)
    return "(%s)" % c


class Poly:
    """Sparse multivariate polynomial: {exponent tuple: nonzero rational}."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        clean = {}
        for e, c in (terms or {}).items():
            c = mpq(c)
            if c:
                assert len(e) == len(self.vars)
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): mpq(c)})

    @classmethod
    def var(cls, vars, name):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): mpq(1)})

    @classmethod
    def gens(cls, vars):
        return tuple(cls.var(vars, v) for v in vars)

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(sum(e) == 0 for e in self.terms)

    def const_value(self):
        assert self.is_const()
        return self.terms.get((0,) * len(self.vars), mpq(0))

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError("variable mismatch: %r vs %r" % (self.vars, other.vars))
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, mpq(0)) + c
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = mpq(other)
            return Poly(self.vars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, mpq(0)) + c1 * c2
        return Poly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        assert k >= 0
        out = Poly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def leading(self):
        """(exponent, coeff) of the graded-lex leading term; (None, 0) if zero."""
        if not self.terms:
            return None, mpq(0)
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def content(self):
        """Positive rational c with self = c * primitive integer polynomial."""
        if not self.terms:
            return mpq(1)
        num = mpz(0)
        den = mpz(1)
        for c in self.terms.values():
            num = gcd(num, mpz(c.numerator))
            den = den * mpz(c.denominator) // gcd(den, mpz(c.denominator))
        return mpq(num, den)

    def evaluate(self, point):
        """Exact value at {var name: rational}."""
        vals = [mpq(point[v]) for v in self.vars]
        total = mpq(0)
        for e, c in self.terms.items():
            t = c
            for base, k in zip(vals, e):
                if k:
                    t = t * base ** k
            total += t
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)
        parts = []
        for e in order:
            c = self.terms[e]
            factors = []
            for name, k in zip(self.vars, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append("%s^%d" % (name, k))
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = "%s*%s" % (_coeff_str(mag), body)
            else:
                body = _coeff_str(mag)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "Poly(%s)" % self


def exact_div(a, b):
    """Exact polynomial quotient a/b, or None when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero():
        return Poly(a.vars, {})
    if a.vars != b.vars:
        raise ValueError("variable mismatch")
    eb, cb = b.leading()
    q = {}
    r = dict(a.terms)
    while r:
        er = max(r, key=lambda e: (sum(e), e))
        step = tuple(x - y for x, y in zip(er, eb))
        if any(x < 0 for x in step):
            return None
        c = r[er] / cb
        q[step] = c
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(step, e2))
            nv = r.get(e, mpq(0)) - c * c2
            if nv:
                r[e] = nv
            else:
                r.pop(e, None)
    return Poly(a.vars, q)


def _monomial_gcd(a, b):
    """Common monomial factor of two polynomials, as an exponent tuple."""
    n = len(a.vars)
    g = None
    for terms in (a.terms, b.terms):
        for e in terms:
            g = e if g is None else tuple(min(x, y) for x, y in zip(g, e))
    return g or (0,) * n


def _strip_monomial(p, e):
    if all(x == 0 for x in e):
        return p
    return Poly(p.vars, {tuple(x - y for x, y in zip(ee, e)): c
                         for ee, c in p.terms.items()})


class RatFunc:
    """Quotient of polynomials, normalized: common monomial and content
    stripped, trial exact division applied, denominator's graded-lex leading
    coefficient positive and denominator primitive with integer coefficients.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            raise TypeError("num must be Poly")
        if den is None:
            den = Poly.const(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.vars != den.vars:
            raise ValueError("variable mismatch")
        if num.is_zero():
            den = Poly.const(num.vars, 1)
        else:
            e = _monomial_gcd(num, den)
            num, den = _strip_monomial(num, e), _strip_monomial(den, e)
            if not den.is_const():
                q = exact_div(num, den)
                if q is not None:
                    num, den = q, Poly.const(num.vars, 1)
                else:
                    q = exact_div(den, num)
                    if q is not None:
                        num, den = Poly.const(num.vars, 1), q
        cn, cd = num.content(), den.content()
        t = mpq(gcd(mpz(cn.numerator * cd.denominator),
                    mpz(cd.numerator * cn.denominator)),
                mpz(cn.denominator * cd.denominator))
        _, lead = den.leading()
        if lead < 0:
            t = -t
        num = num * (1 / t)
        den = den * (1 / t)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, vars, c):
        return cls(Poly.const(vars, c))

    @classmethod
    def var(cls, vars, name):
        return cls(Poly.var(vars, name))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc.const(self.vars, other)

    def __add__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        assert k >= 0
        out = RatFunc.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise DenominatorZero("denominator vanishes at %r" % (point,))
        return self.num.evaluate(point) / d

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)

    def __repr__(self):
        return "RatFunc(%s)" % self


def ratfunc_normalize(num, den):
    """Construct a RatFunc from a num/den pair (normalization happens in init)."""
    return RatFunc(num, den)


class TruncSeries:
    """Power series in g truncated at a fixed order K (coeffs c_0..c_K)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(mpq(c) for c in coeffs)
        assert self.coeffs

    @classmethod
    def const(cls, c, K):
        return cls((mpq(c),) + (mpq(0),) * K)

    @classmethod
    def g(cls, K):
        assert K >= 1
        return cls((mpq(0), mpq(1)) + (mpq(0),) * (K - 1))

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, K):
        assert K <= self.order
        return TruncSeries(self.coeffs[:K + 1])

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            K = min(self.order, other.order)
            return self.truncate(K), other.truncate(K)
        return self, TruncSeries.const(other, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return TruncSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return b + (-a)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = mpq(other)
            return TruncSeries(tuple(x * c for x in self.coeffs))
        a, b = self._coerce(other)
        K = a.order
        out = [mpq(0)] * (K + 1)
        for i, ci in enumerate(a.coeffs):
            if not ci:
                continue
            for j in range(K + 1 - i):
                cj = b.coeffs[j]
                if cj:
                    out[i + j] += ci * cj
        return TruncSeries(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        assert k >= 0
        out = TruncSeries.const(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def valuation(self):
        """Index of first nonzero coefficient, or None if zero to order K."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self):
        return self.valuation() is None

    def divide(self, den):
        """Laurent-aware quotient: strips matching leading powers of g first.

        Result is exact to order (K - valuation(den)). A numerator vanishing
        to lower order than the denominator is a genuine pole: PoleAtZero.
        """
        a, b = self._coerce(den)
        vd = b.valuation()
        if vd is None:
            raise ZeroDivisionError("series division by zero (to this order)")
        va = a.valuation()
        if va is not None and va < vd:
            raise PoleAtZero("pole at g=0: numerator O(g^%d), denominator O(g^%d)"
                             % (va, vd))
        K = a.order - vd
        num = a.coeffs[vd:]
        dd = b.coeffs[vd:]
        out = [mpq(0)] * (K + 1)
        for k in range(K + 1):
            acc = num[k]
            for i in range(1, k + 1):
                acc -= dd[i] * out[k - i] if i < len(dd) else 0
            out[k] = acc / dd[0]
        return TruncSeries(out)

    def integrate(self):
        """Antiderivative with constant term 0, same truncation order."""
        out = [mpq(0)] * (self.order + 1)
        for k in range(self.order):
            out[k + 1] = self.coeffs[k] / (k + 1)
        return TruncSeries(out)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = _coeff_str(mag)
            elif k == 1:
                body = "g" if mag == 1 else "%s*g" % _coeff_str(mag)
            else:
                body = "g^%d" % k if mag == 1 else "%s*g^%d" % (_coeff_str(mag), k)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return "TruncSeries(%s)" % self


def poly_series(p, subst, K):
    """Evaluate a Poly with TruncSeries values for each variable ("g" included)."""
    out = TruncSeries.const(0, K)
    powers = {}

    def power(name, k):
        if k == 0:
            return TruncSeries.const(1, K)
        if (name, k) not in powers:
            powers[(name, k)] = power(name, k - 1) * subst[name]
        return powers[(name, k)]

    for e, c in p.terms.items():
        t = TruncSeries.const(c, K)
        for name, k in zip(p.vars, e):
            if k:
                t = t * power(name, k)
        out = out + t
    return out


def series_compose(f, subst, K):
    """Substitute generator series into a RatFunc and expand about g = 0.

    subst maps generator names to TruncSeries; the "g" variable is the series
    variable itself. Removable g = 0 singularities cancel exactly; a genuine
    pole raises PoleAtZero. When the denominator vanishes to order v > 0 the
    cancellation consumes v orders of the substituted data, so the inputs must
    carry order >= K + v (ValueError otherwise); with an empty subst the g
    variable is exact and extends as needed.
    """
    orders = [s.order for s in subst.values() if isinstance(s, TruncSeries)]
    work = min(orders) if orders else None

    def at(order):
        sub = {"g": TruncSeries.g(max(order, 1))}
        for n, s in subst.items():
            if not isinstance(s, TruncSeries):
                s = TruncSeries.const(s, order)
            if s.order < order:
                raise ValueError("substitution series for %s has order %d < %d"
                                 % (n, s.order, order))
            sub[n] = s.truncate(order)
        return (poly_series(f.num, sub, order), poly_series(f.den, sub, order))

    probe = work if work is not None else K
    num, den = at(probe)
    v = den.valuation()
    if v is None:
        raise PoleAtZero("denominator vanishes identically to order %d" % probe)
    if work is None and v:
        num, den = at(K + v)
    q = num.divide(den)
    if q.order < K:
        raise ValueError("pole cancellation of order %d needs inputs of order %d"
                         % (v, K + v))
    return q.truncate(K)
