"""Model specification: matrix count, potential terms, declared generators,
and potential symmetries, plus the on-disk JSON format.

The action is -N tr( (1/2) sum_i H_i^2 + g * sum_terms coeff * W ); the
Gaussian quadratic part is fixed and implicit. A single coupling g with
rational per-term multipliers covers every shipped configuration.
"""

import hashlib
import importlib.resources
import json

from .exactalg import rat
from .words import CyclicWord, Word, canonicalize


class ModelError(ValueError):
    """Malformed or inconsistent model document."""


class PotentialTerm:
    """One potential monomial: cyclic word and its rational multiplier of g.

    Conventional symmetry divisors (the 1/4 on a quartic trace, etc.) are
    already absorbed into coeff, matching the on-disk format.
    """

    __slots__ = ("word", "coeff")

    def __init__(self, word, coeff):
        self.word = canonicalize(word)
        self.coeff = rat(coeff)
        if len(self.word) < 3:
            raise ModelError("potential term %r shorter than 3 letters (the "
                             "quadratic part is fixed)" % str(self.word))
        if not self.coeff:
            raise ModelError("potential term %r has zero coefficient" % str(self.word))

    def __repr__(self):
        return "PotentialTerm(%s, %s)" % (self.word, self.coeff)


class SymmetryRule:
    """A potential automorphism: a letter permutation or a letter negation."""

    __slots__ = ("kind", "perm", "letters")

    def __init__(self, kind, perm=None, letters=None):
        if kind == "swap":
            self.perm = tuple(perm)
            self.letters = None
            if sorted(self.perm) != list(range(len(self.perm))):
                raise ModelError("swap rule %r is not a permutation" % (perm,))
        elif kind == "negate":
            self.perm = None
            self.letters = frozenset(letters)
            if not self.letters:
                raise ModelError("negate rule with no letters")
        else:
            raise ModelError("unknown symmetry kind %r" % kind)
        self.kind = kind

    def element(self, m):
        """(perm, signs) action on the m-letter alphabet."""
        if self.kind == "swap":
            if len(self.perm) != m:
                raise ModelError("swap rule arity %d != %d matrices"
                                 % (len(self.perm), m))
            return self.perm, (1,) * m
        if any(l >= m for l in self.letters):
            raise ModelError("negate rule letter out of range")
        return tuple(range(m)), tuple(-1 if i in self.letters else 1
                                      for i in range(m))

    def to_json(self):
        if self.kind == "swap":
            return {"kind": "swap", "perm": list(self.perm)}
        return {"kind": "negate", "letters": sorted(self.letters)}


def apply_element(element, w):
    """Image of a word under (perm, signs); returns (CyclicWord, sign).

    The sign is the product of per-letter signs over the word, so that
    m_w = sign * m_image for an invariant potential.
    """
    perm, signs = element
    sign = 1
    out = []
    for a in w:
        out.append(perm[a])
        sign *= signs[a]
    return canonicalize(out), sign


def apply_symmetry(rule, w, m=None):
    """Apply a single rule to a word: (canonical image, sign)."""
    if m is None:
        m = max((max(w) + 1) if tuple(w) else 1, len(rule.perm or ()) or 1)
    return apply_element(rule.element(m), w)


def _compose(e1, e2):
    """Element acting as e1 then e2."""
    p1, s1 = e1
    p2, s2 = e2
    perm = tuple(p2[p1[i]] for i in range(len(p1)))
    signs = tuple(s1[i] * s2[p1[i]] for i in range(len(p1)))
    return perm, signs


class ModelSpec:
    __slots__ = ("name", "m", "terms", "generators", "symmetries", "_group",
                 "_orbits")

    def __init__(self, name, m, terms, generators, symmetries):
        self.name = name
        self.m = m
        self.terms = list(terms)
        self.generators = [canonicalize(g) for g in generators]
        self.symmetries = list(symmetries)
        self._group = None
        self._orbits = {}
        self._validate()

    def _validate(self):
        if self.m < 1 or self.m > 8:
            raise ModelError("matrix count %r out of range" % self.m)
        seen = set()
        for t in self.terms:
            if any(a >= self.m for a in t.word):
                raise ModelError("term %r uses letters beyond %d matrices"
                                 % (str(t.word), self.m))
            if t.word in seen:
                raise ModelError("duplicate potential term %r" % str(t.word))
            seen.add(t.word)
        gseen = set()
        for gw in self.generators:
            if any(a >= self.m for a in gw):
                raise ModelError("generator %r uses letters beyond %d matrices"
                                 % (str(gw), self.m))
            if not gw:
                raise ModelError("the empty word cannot be a generator")
            if gw in gseen:
                raise ModelError("duplicate generator %r" % str(gw))
            gseen.add(gw)
        term_map = {t.word: t.coeff for t in self.terms}
        for rule in self.symmetries:
            el = rule.element(self.m)
            for t in self.terms:
                img, sign = apply_element(el, t.word)
                if term_map.get(img) != sign * t.coeff:
                    raise ModelError(
                        "symmetry %r is not a potential automorphism: maps "
                        "%s (coeff %s) to %s with sign %d"
                        % (rule.to_json(), t.word, t.coeff, img, sign))

    def group(self):
        """Closure of the declared rules as (perm, signs) elements, identity
        first, deterministic order."""
        if self._group is None:
            identity = (tuple(range(self.m)), (1,) * self.m)
            gens = [r.element(self.m) for r in self.symmetries]
            seen = {identity}
            frontier = [identity]
            while frontier:
                nxt = []
                for e in frontier:
                    for gen in gens:
                        c = _compose(e, gen)
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
                frontier = nxt
            self._group = sorted(seen)
        return self._group

    def orbit_representative(self, w):
        """(representative CyclicWord, sign, forced_zero) for the moment class
        of w under the declared symmetry group.

        m_w = sign * m_rep; forced_zero means some group element fixes the
        class with sign -1, so the moment vanishes identically.
        """
        key = canonicalize(w)
        hit = self._orbits.get(key)
        if hit is not None:
            return hit
        images = {}
        for el in self.group():
            img, sign = apply_element(el, key)
            images.setdefault(img, set()).add(sign)
        rep = min(images)
        if len(images[rep]) == 2:
            out = (rep, 1, True)
        elif next(iter(images[rep])) == 1:
            out = (rep, 1, False)
        else:
            out = (rep, -1, False)
        if len(self._orbits) < 1 << 18:
            self._orbits[key] = out
        return out

    def generator_names(self):
        """Display symbols for generators: m<length>, or m_<word> on collision."""
        lengths = [len(g) for g in self.generators]
        names = []
        for gw in self.generators:
            if lengths.count(len(gw)) == 1:
                names.append("m%d" % len(gw))
            else:
                names.append("m_%s" % gw)
        return tuple(names)

    def to_json(self):
        return {
            "name": self.name,
            "matrices": self.m,
            "terms": [{"word": str(t.word), "coeff": str(t.coeff)}
                      for t in self.terms],
            "generators": [str(g) for g in self.generators],
            "symmetries": [r.to_json() for r in self.symmetries],
        }

    def sha256(self):
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def __repr__(self):
        return "ModelSpec(%r, m=%d, %d terms)" % (self.name, self.m, len(self.terms))


def parse_model(doc):
    """Validated ModelSpec from a JSON string or an already-decoded dict."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise ModelError("model file is not valid JSON: %s" % e)
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    known = {"name", "matrices", "terms", "generators", "symmetries"}
    unknown = set(doc) - known
    if unknown:
        raise ModelError("unknown model fields: %s" % sorted(unknown))
    try:
        m = int(doc["matrices"])
    except (KeyError, TypeError, ValueError):
        raise ModelError("missing or bad 'matrices' field")
    terms = []
    for entry in doc.get("terms", []):
        try:
            w = Word.parse(entry["word"])
            c = rat(entry["coeff"])
        except (KeyError, TypeError, ValueError) as e:
            raise ModelError("bad potential term %r: %s" % (entry, e))
        terms.append(PotentialTerm(w, c))
    generators = [Word.parse(s) for s in doc.get("generators", [])]
    rules = []
    for entry in doc.get("symmetries", []):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ModelError("bad symmetry rule %r" % (entry,))
        rules.append(SymmetryRule(entry["kind"], perm=entry.get("perm"),
                                  letters=entry.get("letters")))
    return ModelSpec(doc.get("name", "unnamed"), m, terms, generators, rules)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_model(text)


def preset_path(name):
    """Filesystem path of a shipped preset (gaussian1, quartic, ggg, gmgg,
    ggmg, mggg, 3matrix)."""
    res = importlib.resources.files("momenta").joinpath("presets/%s.json" % name)
    return str(res)


def load_preset(name):
    return load_model(preset_path(name))
