"""Symbolic reduction of the Schwinger-Dyson system: every moment up to a
cutoff as an exact rational function of g and the declared generators.

The elimination is linear only: an equation participates once at most one
factor in each of its product terms is still unexpressed (a product with an
expressed zero factor vanishes; with one expressed factor it is a linear
term). Equations are never solved as quadratics; insertion words are fed in
increasing length until the requested moments resolve, and a genuinely open
system raises.
"""

import itertools

from .exactalg import Poly, RatFunc
from .sde import equations_for_length, generate_system
from .words import canonicalize, reverse

PRUNE_SLACK = 4  # keep unknowns up to the longest pivot an insertion can give
EXTRA_LENGTHS = 4  # insertion lengths to try beyond the cutoff before giving up


def _vars_used(rf):
    """Names of variables actually present in a RatFunc."""
    used = set()
    for p in (rf.num, rf.den):
        for e in p.terms:
            for name, k in zip(p.vars, e):
                if k:
                    used.add(name)
    return used


class InconsistentSystem(ArithmeticError):
    """A nonzero constant relation was derived (bad generator declaration)."""


class UnresolvedAtCutoff(RuntimeError):
    """Moments at or below the cutoff stayed unexpressed; raise the cutoff."""

    def __init__(self, words, detail=""):
        self.words = sorted(words, key=lambda w: (len(w), w))
        msg = "unresolved moments at cutoff: %s" % ", ".join(
            str(w) for w in self.words)
        super().__init__(msg + (" (%s)" % detail if detail else ""))


class MomentTable:
    """Solved moments: canonical symmetry representative -> RatFunc in
    ("g", *generator names). Lookups accept any word and apply the cyclic
    canonicalization and symmetry sign."""

    __slots__ = ("model", "cutoff", "entries", "unresolved", "relations")

    def __init__(self, model, cutoff, entries, unresolved, relations):
        self.model = model
        self.cutoff = cutoff
        self.entries = entries
        self.unresolved = unresolved
        self.relations = relations

    @property
    def vars(self):
        return ("g",) + self.model.generator_names()

    def lookup(self, w):
        """RatFunc value of the moment of w; raises KeyError when unresolved."""
        rep, sign, zero = self.model.orbit_representative(canonicalize(w))
        if zero:
            return RatFunc.const(self.vars, 0)
        if not rep:
            return RatFunc.const(self.vars, 1)
        if rep not in self.entries:
            raise KeyError("moment %s (rep %s) not in table (cutoff %d)"
                           % (canonicalize(w), rep, self.cutoff))
        val = self.entries[rep]
        return val if sign == 1 else -val

    def known(self, w):
        rep, _, zero = self.model.orbit_representative(canonicalize(w))
        return zero or not rep or rep in self.entries

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))


class _Eliminator:
    """Linear elimination state over the RatFunc field.

    table maps representatives to solved RatFuncs; pivot_rows express their
    pivot (the longest unknown of the row) in terms of strictly smaller ones,
    so substitution always terminates.
    """

    def __init__(self, vars, classify, keep):
        self.vars = vars
        self.classify = classify
        self.keep = keep
        self.zero = RatFunc.const(vars, 0)
        self.gpoly = Poly.var(vars, "g")
        self.table = {}
        self.pivot_rows = {}
        self.relations = []
        self.stalled = []

    def coeff_ratfunc(self, c, gpow):
        return RatFunc(Poly.const(self.vars, c) * self.gpoly ** gpow)

    def feed(self, eqs):
        for eq in eqs:
            terms = []
            for t in eq.terms:
                c = self.coeff_ratfunc(t.coeff, t.gpow)
                reps = []
                dead = False
                for f in t.factors:
                    rep, sign, is_zero = self.classify(f)
                    if is_zero:
                        dead = True
                        break
                    if sign == -1:
                        c = -c
                    reps.append(rep)
                if not dead:
                    terms.append((c, reps))
            if terms:
                self.stalled.append((eq, terms))
        self._fixpoint()

    def _substitute_known(self, linear, const):
        changed = True
        while changed:
            changed = False
            for u in list(linear):
                if u in self.table:
                    const = const + linear.pop(u) * self.table[u]
                    changed = True
        return linear, const

    def _harvest(self):
        progressed = True
        while progressed:
            progressed = False
            for pivot in sorted(self.pivot_rows, key=lambda w: (len(w), w)):
                linear, const = self.pivot_rows[pivot]
                linear, const = self._substitute_known(linear, const)
                self.pivot_rows[pivot] = (linear, const)
                if not linear:
                    self.table[pivot] = const
                    del self.pivot_rows[pivot]
                    progressed = True

    def _absorb(self, eq, linear, const):
        """Reduce a fully linear row against the current state."""
        linear = {u: c for u, c in linear.items() if not c.is_zero()}
        linear, const = self._substitute_known(linear, const)
        reduced = True
        while reduced:
            reduced = False
            for u in sorted(linear, key=lambda w: (len(w), w), reverse=True):
                if u in self.pivot_rows:
                    c = linear.pop(u)
                    prow, pconst = self.pivot_rows[u]
                    for v, cv in prow.items():
                        linear[v] = linear.get(v, self.zero) + c * cv
                    const = const + c * pconst
                    linear = {v: cc for v, cc in linear.items()
                              if not cc.is_zero()}
                    reduced = True
                    break
            linear, const = self._substitute_known(linear, const)
        if not linear:
            if not const.is_zero():
                if _vars_used(const) <= {"g"}:
                    raise InconsistentSystem(
                        "insertion (%d, %s) reduces to %s = 0"
                        % (eq.p, eq.w, const))
                self.relations.append(const)
            return
        pivot = max(linear, key=lambda w: (len(w), w))
        if len(pivot) > self.keep:
            return
        c = linear.pop(pivot)
        row = {v: -(cv / c) for v, cv in linear.items()}
        self.pivot_rows[pivot] = (row, -(const / c))
        self._harvest()

    def _fixpoint(self):
        progressed = True
        while progressed:
            progressed = False
            remaining = []
            for eq, terms in self.stalled:
                linear = {}
                const = self.zero
                ready = True
                for c, reps in terms:
                    unexpressed = [r for r in reps if r not in self.table]
                    if len(unexpressed) > 1:
                        ready = False
                        break
                    acc = c
                    for r in reps:
                        if r in self.table:
                            acc = acc * self.table[r]
                    if acc.is_zero():
                        continue
                    if unexpressed:
                        u = unexpressed[0]
                        linear[u] = linear.get(u, self.zero) + acc
                    else:
                        const = const + acc
                if not ready:
                    remaining.append((eq, terms))
                    continue
                progressed = True
                self._absorb(eq, linear, const)
            self.stalled = remaining


def _tracked_unknowns(model, cutoff, use_symmetries=True):
    """Representatives of all nonvanishing words of length 1..cutoff."""
    reps = set()
    for L in range(1, cutoff + 1):
        for letters in itertools.product(range(model.m), repeat=L):
            if use_symmetries:
                rep, _, zero = model.orbit_representative(letters)
                if not zero:
                    reps.add(rep)
            else:
                reps.add(canonicalize(letters))
    return reps


def solve_moments(model, cutoff, max_insertion_len=None, use_symmetries=True,
                  strict=True):
    """Express every moment of length <= cutoff via linear elimination.

    Insertion words are fed by increasing length until the tracked moments
    resolve (at most cutoff plus a few extra lengths, or max_insertion_len
    when given). With strict=False, structurally free moments (for example
    parity-odd sectors when no negation symmetry is declared) are left in
    table.unresolved instead of raising.
    """
    if model.generators and cutoff < max(len(g) for g in model.generators):
        raise ValueError("cutoff below longest generator")
    names = model.generator_names()
    vars = ("g",) + names

    def classify(w):
        if use_symmetries:
            return model.orbit_representative(w)
        return canonicalize(w), 1, False

    longest = max((len(t.word) for t in model.terms), default=0)
    keep = cutoff + max(longest, 2) + PRUNE_SLACK
    elim = _Eliminator(vars, classify, keep)

    for gw, name in zip(model.generators, names):
        rep, sign, zero = model.orbit_representative(gw)
        if use_symmetries and (zero or rep != gw or sign != 1):
            raise InconsistentSystem(
                "generator %s is not a symmetry representative" % gw)
        elim.table[canonicalize(gw) if not use_symmetries else rep] = \
            RatFunc(Poly.var(vars, name))

    target = _tracked_unknowns(model, cutoff, use_symmetries)
    limit = max_insertion_len if max_insertion_len is not None else \
        cutoff + EXTRA_LENGTHS
    seen = set()
    unresolved = target
    for L in range(limit + 1):
        elim.feed(equations_for_length(model, L, use_symmetries, seen))
        unresolved = {w for w in target if w not in elim.table}
        if not unresolved:
            break
    if unresolved:
        if strict:
            raise UnresolvedAtCutoff(unresolved,
                                     "insertions up to length %d" % limit)
    entries = {w: v for w, v in elim.table.items() if len(w) <= cutoff}
    return MomentTable(model, cutoff, entries, unresolved, elim.relations)


def free_energy_derivative(model, table):
    """-d/dg of the planar free energy: -sum_terms coeff * m_word, simplified."""
    vars = ("g",) + model.generator_names()
    out = RatFunc.const(vars, 0)
    for t in model.terms:
        out = out - t.coeff * table.lookup(t.word)
    return out


def report_search_space(table):
    """Diagnostics: declared generators, generator relations found during
    elimination (a nonempty list means some generator is eliminable), and
    unresolved words (search space larger than declared)."""
    model = table.model
    return {
        "generators": [str(g) for g in model.generators],
        "dimension_declared": len(model.generators),
        "generator_relations": [str(r) for r in table.relations],
        "eliminable": bool(table.relations),
        "unresolved": [str(w) for w in sorted(table.unresolved,
                                              key=lambda w: (len(w), w))],
    }


def verify_round_trip(model, table, max_len=None):
    """Substitute the table into every generated equation; all must vanish.

    Returns the number of equations checked. This is the ground-truth
    consistency check used by the golden tests.
    """
    if max_len is None:
        longest = max((len(t.word) for t in model.terms), default=2)
        max_len = table.cutoff - max(longest - 1, 1)
    checked = 0
    for eq in generate_system(model, max_len):
        total = RatFunc.const(table.vars, 0)
        for t in eq.terms:
            acc = RatFunc(Poly.const(table.vars, t.coeff) *
                          Poly.var(table.vars, "g") ** t.gpow)
            for f in t.factors:
                acc = acc * table.lookup(f)
            total = total + acc
        if not total.is_zero():
            raise AssertionError("equation (%d, %s) fails round trip: %s"
                                 % (eq.p, eq.w, total))
        checked += 1
    return checked


def reversal_consistent(table):
    """m_W equals m_reverse(W) for every solved entry (reality check)."""
    for w, val in table.items():
        if table.lookup(reverse(w.word)) != val:
            return False
    return True
