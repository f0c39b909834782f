"""Large-N Schwinger-Dyson equations as exact relations among tracial moments.

For the action -N tr((1/2) sum H_i^2 + g sum_V c_V V), inserting the word w and
differentiating with respect to matrix p gives

    0 = sum_{i: w[i]=p} m_{w[<i]} m_{w[>i]}          (large-N factorized splits)
        - m_{canon(w p)}                             (Gaussian part)
        - sum_V c_V g sum_{j: V[j]=p} m_{canon(w * V-rotated-past-j)}

where the potential derivative deletes occurrence j of p from V read
cyclically (the remaining letters follow in cyclic order starting after j).
"""

from .exactalg import rat
from .words import CyclicWord, Word, canonicalize, moment_name

# A moment symbol is just the canonical cyclic word of its trace.
MomentSymbol = CyclicWord


class SdeTerm:
    """coeff * g^gpow * product(factors); factors is a sorted tuple of moment
    symbols (empty-word factors are dropped since m_1 = 1), length <= 2."""

    __slots__ = ("coeff", "gpow", "factors")

    def __init__(self, coeff, gpow, factors):
        self.coeff = rat(coeff)
        self.gpow = gpow
        self.factors = tuple(sorted(tuple(f) for f in factors if len(f)))
        self.factors = tuple(CyclicWord(f) for f in self.factors)

    def key(self):
        return (self.gpow, self.factors)

    def __repr__(self):
        return "SdeTerm(%s, g^%d, %s)" % (self.coeff, self.gpow,
                                          [str(f) for f in self.factors])


class SdeEquation:
    """0 = sum(terms), tagged with the insertion (p, w) that produced it."""

    __slots__ = ("p", "w", "terms")

    def __init__(self, p, w, terms):
        self.p = p
        self.w = Word(w)
        merged = {}
        for t in terms:
            k = t.key()
            merged[k] = merged.get(k, rat(0)) + t.coeff
        self.terms = tuple(SdeTerm(c, k[0], k[1])
                           for k, c in sorted(merged.items()) if c)

    def signature(self):
        """Insertion-independent canonical form, used for deduplication."""
        return tuple((t.gpow, t.factors, t.coeff) for t in self.terms)

    def render(self, naming="words", m=None, compact=False, zero_side="left"):
        """One-line text form. naming "tuples" uses block-exponent names
        (pattern length m when given); compact drops the underscore on
        single-block names; zero_side "right" renders "... = 0"."""
        if not self.terms:
            return "0 = 0"
        parts = []
        for t in self.terms:
            if naming == "tuples":
                syms = [moment_name(f, m=m, compact=compact)
                        for f in t.factors]
            else:
                syms = ["m_%s" % (str(f),) for f in t.factors]
            mag = abs(t.coeff)
            body = []
            if mag != 1 or (t.gpow == 0 and not syms):
                body.append(str(mag) if mag.denominator == 1 else "(%s)" % mag)
            if t.gpow == 1:
                body.append("g")
            elif t.gpow > 1:
                body.append("g^%d" % t.gpow)
            body.extend(syms)
            text = "*".join(body)
            if not parts:
                parts.append(text if t.coeff > 0 else "-" + text)
            else:
                parts.append(("+ " if t.coeff > 0 else "- ") + text)
        body = " ".join(parts)
        if zero_side == "right":
            return body + " = 0"
        return "0 = " + body

    def __repr__(self):
        return "SdeEquation(p=%d, w=%s: %s)" % (self.p, self.w, self.render())


def _cyclic_deletion(V, j):
    """Letters of V read cyclically starting after position j, with V[j] dropped."""
    t = tuple(V)
    return t[j + 1:] + t[:j]


def derive_sde(model, p, w, use_symmetries=True):
    """The insertion-(p, w) equation, canonicalized and (optionally)
    symmetry-merged. w may be empty."""
    w = Word(w)
    if p >= model.m or any(a >= model.m for a in w):
        raise ValueError("letter out of range for %d-matrix model" % model.m)
    raw = []
    for i, a in enumerate(w):
        if a == p:
            pre, suf = canonicalize(w[:i]), canonicalize(w[i + 1:])
            assert len(pre) + len(suf) == len(w) - 1
            raw.append((rat(1), 0, (pre, suf)))
    gauss = canonicalize(tuple(w) + (p,))
    assert len(gauss) == len(w) + 1
    raw.append((rat(-1), 0, (gauss,)))
    for term in model.terms:
        V = tuple(term.word)
        for j, a in enumerate(V):
            if a == p:
                mom = canonicalize(tuple(w) + _cyclic_deletion(V, j))
                assert len(mom) == len(w) + len(V) - 1
                raw.append((-term.coeff, 1, (mom,)))
    out = []
    for coeff, gpow, factors in raw:
        if use_symmetries:
            mapped = []
            dead = False
            for f in factors:
                rep, sign, zero = model.orbit_representative(f)
                if zero:
                    dead = True
                    break
                coeff = coeff * sign
                mapped.append(rep)
            if dead:
                continue
            factors = mapped
        out.append(SdeTerm(coeff, gpow, factors))
    return SdeEquation(p, w, out)


def equations_for_length(model, L, use_symmetries=True, seen=None):
    """Deduplicated insertion equations for |w| == L exactly.

    seen is a signature set shared across calls so that equations repeated at
    different insertion words appear once; trivial 0 = 0 equations
    (symmetry-killed lines) are dropped.
    """
    if seen is None:
        seen = set()
    out = []
    for idx in range(model.m ** L):
        letters = []
        v = idx
        for _ in range(L):
            letters.append(v % model.m)
            v //= model.m
        w = Word(reversed(letters))
        for p in range(model.m):
            eq = derive_sde(model, p, w, use_symmetries)
            if not eq.terms:
                continue
            sig = eq.signature()
            if sig not in seen:
                seen.add(sig)
                out.append(eq)
    return out


def generate_system(model, max_len, use_symmetries=True):
    """All insertion equations for |w| <= max_len, deduplicated, keeping the
    earliest (shortest, lexicographically first) insertion of each."""
    assert max_len >= 0
    seen = set()
    order = []
    for L in range(max_len + 1):
        order.extend(equations_for_length(model, L, use_symmetries, seen))
    return order
