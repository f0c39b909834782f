"""Hankel moment matrices over word bases, exact positivity tests, and
symbolic minor constraints.

For any finite family of words w_1..w_n the matrix of moments of
reverse(w_i)w_j is a Gram matrix of the trace inner product, so it must
be positive semidefinite whenever the moments come from an actual
matrix-model measure. Building that matrix symbolically over a solved
moment table, testing candidate moment values exactly, and extracting
polynomial determinant constraints are the three operations here. No
floating point appears anywhere: semidefiniteness is decided over the
rationals, so boundary cases are classified correctly instead of being
lost to rounding.
"""

from gmpy2 import mpq

from .exactalg import RatFunc
from .words import Word, basis, reverse


def hankel_basis(model, n):
    """First n row-label words, shortest first then lexicographic."""
    for max_len in range(n + 1):
        picked = basis(model.m, max_len)
        if len(picked) >= n:
            return tuple(picked[:n])
    raise ValueError("cannot collect %d basis words" % n)


def sector_split(model, rows):
    """Partition row words into blocks with no forced-zero coupling.

    Two words land in the same block when the moment class of
    reverse(w_i)w_j is not forced to zero by the model's symmetries
    (connected components of that relation). Cross-block entries of the
    Hankel matrix are identically zero, so the matrix is a direct sum of
    its blocks and testing every block separately gives exactly the
    verdict of the full matrix at a fraction of the size.
    """
    rows = tuple(rows)
    parent = list(range(len(rows)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, wi in enumerate(rows):
        ri = tuple(reverse(wi))
        for j in range(i + 1, len(rows)):
            _, _, zero = model.orbit_representative(Word(ri + tuple(rows[j])))
            if not zero:
                parent[find(j)] = find(i)
    blocks = {}
    for i in range(len(rows)):
        blocks.setdefault(find(i), []).append(rows[i])
    return tuple(tuple(b) for b in blocks.values())


def build_hankel(model, table, n, rows=None):
    """n x n matrix of moment closed forms over the word basis.

    Entry (i, j) is the table value of reverse(w_i)w_j, so the matrix is
    exactly symmetric (moments are reversal invariant). Rows may be given
    explicitly as words or strings; otherwise the first n basis words are
    used. Raises KeyError when the table cutoff is smaller than twice the
    longest row word.
    """
    if rows is None:
        rows = hankel_basis(model, n)
    else:
        rows = tuple(Word.parse(w) if isinstance(w, str) else w
                     for w in rows)
        if len(rows) != n:
            raise ValueError("expected %d rows, got %d" % (n, len(rows)))
    out = []
    for wi in rows:
        ri = tuple(reverse(wi))
        out.append([table.lookup(Word(ri + tuple(wj))) for wj in rows])
    return out


def bound_matrix(model, table):
    """The 5x5 matrix on rows (1, A, B, AA, AB) with the bottom-right
    entry replaced by the moment of ABAB.

    The row basis itself would put AABB there; the ABAB variant is the
    one whose determinant factors through 4 g m2^2 + m2 - 1 and yields
    the two-sided bound on m2. Both variants are exposed (the faithful
    one through build_hankel) and the tests pin their difference.
    """
    M = build_hankel(model, table, 5)
    M[4][4] = table.lookup(Word.parse("ABAB"))
    return M


class PsdVerdict:
    """Outcome of the exact semidefiniteness test.

    feasible is the decision. When feasible, certificate is the tuple of
    elimination pivots (zeros included for skipped null rows); when not,
    it is the 1-based size of the leading principal block at which the
    elimination failed, through a negative pivot or a zero pivot whose
    row does not vanish.
    """

    __slots__ = ("feasible", "certificate")

    def __init__(self, feasible, certificate):
        self.feasible = feasible
        self.certificate = certificate

    def __bool__(self):
        return self.feasible

    def __eq__(self, other):
        if not isinstance(other, PsdVerdict):
            return NotImplemented
        return (self.feasible, self.certificate) == (
            other.feasible, other.certificate)

    def __hash__(self):
        return hash((self.feasible, self.certificate))

    def __repr__(self):
        return "PsdVerdict(%r, %r)" % (self.feasible, self.certificate)


def psd_test_exact(M):
    """Exact positive-semidefiniteness decision for a symmetric matrix of
    rationals, by symmetric Gaussian elimination in the given order.

    A positive pivot eliminates its row and column. A zero pivot is
    accepted only when its entire remaining row vanishes, since a zero
    diagonal entry with a nonzero coupling gives a 2x2 principal block
    with negative determinant. Any negative pivot decides infeasibility.
    Boundary-singular matrices therefore count as feasible.
    """
    n = len(M)
    A = [[mpq(x) for x in row] for row in M]
    for row in A:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix is not symmetric at (%d, %d)"
                                 % (i, j))
    pivots = []
    for k in range(n):
        p = A[k][k]
        if p < 0:
            return PsdVerdict(False, k + 1)
        if p == 0:
            if any(A[k][j] for j in range(k + 1, n)):
                return PsdVerdict(False, k + 1)
            pivots.append(p)
            continue
        pivots.append(p)
        for i in range(k + 1, n):
            f = A[i][k] / p
            if f:
                for j in range(k + 1, n):
                    A[i][j] -= f * A[k][j]
    return PsdVerdict(True, tuple(pivots))


def evaluate_matrix(M, point):
    """Matrix of exact rational values of M at {var: rational}.

    Raises DenominatorZero when any entry's denominator vanishes at the
    point, which grid scans report as an indeterminate verdict.
    """
    return [[f.evaluate(point) for f in row] for row in M]


def _det(A):
    """Determinant of a square matrix of RatFuncs by elimination."""
    n = len(A)
    if n == 0:
        raise ValueError("empty minor")
    vars = A[0][0].vars
    A = [row[:] for row in A]
    out = RatFunc.const(vars, 1)
    for k in range(n):
        piv = next((i for i in range(k, n) if not A[i][k].is_zero()), None)
        if piv is None:
            return RatFunc.const(vars, 0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            out = -out
        out = out * A[k][k]
        for i in range(k + 1, n):
            if not A[i][k].is_zero():
                f = A[i][k] / A[k][k]
                A[i] = [A[i][j] - f * A[k][j] for j in range(n)]
    return out


def minor_constraint(M, rows):
    """Denominator-cleared polynomial form of a principal-minor bound.

    Computes the determinant of the principal submatrix on the given row
    indices and returns numerator times denominator of the normalized
    result. That product is the determinant multiplied by the square of
    its denominator, so it carries the same sign wherever it is defined
    and "constraint >= 0" needs no sign bookkeeping.
    """
    rows = sorted(set(rows))
    if not rows:
        raise ValueError("empty minor")
    sub = [[M[i][j] for j in rows] for i in rows]
    d = _det(sub)
    return d.num * d.den
