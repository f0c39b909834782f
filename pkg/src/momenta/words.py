"""Words over the matrix alphabet and their cyclic (necklace) classes.

Letters are small integers 0, 1, 2, ... printed as A, B, C, ...; a tracial
moment is indexed by the lexicographically least rotation of its word.
"""

import itertools

ALPHABET = "ABCDEFGH"


class Word(tuple):
    """A finite word of letters; the empty word is the identity (prints "1")."""

    def __new__(cls, letters=()):
        w = super().__new__(cls, letters)
        assert all(0 <= a < len(ALPHABET) for a in w)
        return w

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("", "1"):
            return cls()
        try:
            return cls(ALPHABET.index(ch) for ch in text)
        except ValueError:
            raise ValueError("bad word %r: letters must be in %s" % (text, ALPHABET))

    def __str__(self):
        if not self:
            return "1"
        return "".join(ALPHABET[a] for a in self)

    def __repr__(self):
        return "Word(%r)" % str(self)

    def __add__(self, other):
        return Word(tuple.__add__(self, other))


def _least_rotation(s):
    # Booth's least-rotation algorithm, O(n).
    n = len(s)
    if n == 0:
        return s
    s2 = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s2[j]
        i = f[j - k - 1]
        while i != -1 and sj != s2[k + i + 1]:
            if sj < s2[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s2[k + i + 1]:
            if sj < s2[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return s2[k:k + n]


class CyclicWord(tuple):
    """Least rotation of a word; the canonical index of a tracial moment.

    Reversal classes are deliberately NOT merged here: m_W = m_reverse(W) is a
    derived fact checked by the reduction tests, not an identification.
    """

    _cache = {}

    def __new__(cls, letters=()):
        t = tuple(letters)
        hit = cls._cache.get(t)
        if hit is None:
            hit = super().__new__(cls, _least_rotation(t))
            if len(cls._cache) < 1 << 20:
                cls._cache[t] = hit
        return hit

    @property
    def word(self):
        return Word(self)

    def __str__(self):
        if not self:
            return "1"
        return "".join(ALPHABET[a] for a in self)

    def __repr__(self):
        return "CyclicWord(%r)" % str(self)


def canonicalize(w):
    """Cyclic class of a word: canonicalize(rotate(w, k)) == canonicalize(w)."""
    return CyclicWord(w)


def reverse(w):
    """Reversal (the Hermitian star on tracial words); an involution."""
    return Word(tuple(w)[::-1])


def basis(m, max_len):
    """All words of length <= max_len over m letters, shortest first then lex.

    len(basis(2, 3)) == 1 + 2 + 4 + 8 == 15.
    """
    assert m >= 1 and max_len >= 0
    out = []
    for k in range(max_len + 1):
        out.extend(Word(p) for p in itertools.product(range(m), repeat=k))
    return out


def rotations(w):
    t = tuple(w)
    return [Word(t[i:] + t[:i]) for i in range(len(t))] or [Word()]


def exponent_tuple(w, m=None):
    """Block-exponent notation: exponents against the repeating pattern A,B(,C).

    AABB -> (2, 2); ABAB -> (1, 1, 1, 1); for three letters ABAC is
    (1, 1, 0, 1, 0, 1): a zero exponent skips one pattern letter. The pattern
    length is the model's alphabet size; ABAB against three letters is
    (1, 1, 0, 1, 1). Encodes the word as spelled (callers pass the canonical
    rotation).
    """
    w = tuple(w)
    if not w:
        return ()
    if m is None:
        m = max(max(w) + 1, 2)
    elif w and max(w) >= m:
        raise ValueError("letter outside alphabet of size %d" % m)
    blocks = []
    for a in w:
        if blocks and blocks[-1][0] == a:
            blocks[-1][1] += 1
        else:
            blocks.append([a, 1])
    out = []
    ptr = 0
    for letter, count in blocks:
        while ptr % m != letter:
            out.append(0)
            ptr += 1
        out.append(count)
        ptr += 1
    return tuple(out)


def word_from_exponents(t, m):
    """Inverse of exponent_tuple for a given alphabet size."""
    letters = []
    ptr = 0
    for e in t:
        if e:
            letters.extend([ptr % m] * e)
        ptr += 1
    return Word(letters)


def moment_name(w, m=None, compact=False):
    """Display name of a moment in block-exponent notation (m_4, m_{2,2}, ...).

    compact=True drops the underscore on single-block names (m4), the form
    used for generator variables in printed formulas.
    """
    w = tuple(w)
    if not w:
        return "1"
    t = exponent_tuple(w, m)
    if len(t) == 1:
        return ("m%d" if compact else "m_%d") % t[0]
    return "m_{%s}" % ",".join(str(e) for e in t)
