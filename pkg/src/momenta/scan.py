"""Feasibility scans, critical-point estimates, and exponent fits.

This layer substitutes exact rational grid points into the symbolic moment
matrices, tests positive semidefiniteness exactly, and extracts critical
couplings three ways: as boundaries of the feasible region across matrix
sizes, as real-root boundaries of truncated moment numerators, and as fitted
power laws on boundary curves. Grid arithmetic is exact throughout; floats
enter only in the least-squares fit and in bisection results reported as
approximate.
"""

import math
from itertools import product

from gmpy2 import isqrt, mpq

from .exactalg import DenominatorZero, Poly, exact_div, rat
from .hankel import build_hankel, evaluate_matrix, psd_test_exact
from .words import Word

__all__ = [
    "FeasibilityGrid",
    "CriticalEstimate",
    "ExponentFit",
    "parse_range",
    "feasible_at",
    "scan_region",
    "feasible_interval",
    "boundary_points",
    "estimate_critical_point",
    "refine_boundary",
    "quartic_analytic",
    "quartic_curve",
    "quartic_curvature",
    "numerator_discriminant",
    "bisect_sign_change",
    "truncation_critical",
    "fit_exponent",
]


def parse_range(text):
    """Grid axis from "start:stop:step" with exact rational fields.

    Endpoints are inclusive: the axis holds start, start + step, ... up to
    the largest value not exceeding stop. The step must be positive.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("range must be start:stop:step, got %r" % (text,))
    start, stop, step = (rat(p.strip()) for p in parts)
    if step <= 0:
        raise ValueError("range step must be positive, got %s" % step)
    if stop < start:
        raise ValueError("empty range: stop %s is below start %s" % (stop, start))
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop:
            break
        values.append(v)
        k += 1
    return tuple(values)


class FeasibilityGrid:
    """Exact feasibility verdicts on a rational product grid.

    The grid is the product of a coupling axis (g_values) and one axis per
    free generator moment, in the model's declaration order. Each cell holds
    True (the evaluated matrix passed the exact PSD test), False (a pivot
    certificate of infeasibility exists), or None when some closed form has
    a vanishing denominator at the point, so the cell is indeterminate
    rather than infeasible. Cell indices are (g index, axis indices...).
    """

    __slots__ = ("model", "n", "g_values", "axes", "cells", "matrix")

    def __init__(self, model, n, g_values, axes, cells, matrix=None):
        self.model = model
        self.n = n
        self.g_values = tuple(g_values)
        self.axes = tuple((name, tuple(vals)) for name, vals in axes)
        self.cells = dict(cells)
        self.matrix = matrix
        expected = len(self.g_values)
        for _, vals in self.axes:
            expected *= len(vals)
        if len(self.cells) != expected:
            raise ValueError("got %d cells for a grid of %d points"
                             % (len(self.cells), expected))

    def point(self, idx):
        """Substitution dict {symbol: rational} for one cell index."""
        pt = {"g": self.g_values[idx[0]]}
        for (name, vals), k in zip(self.axes, idx[1:]):
            pt[name] = vals[k]
        return pt

    def verdict(self, idx):
        return self.cells[idx]

    def indeterminate_cells(self):
        """Sorted indices of cells where evaluation hit a vanishing
        denominator, reported separately from infeasible cells."""
        return tuple(sorted(i for i, v in self.cells.items() if v is None))

    def feasible_cells(self):
        return tuple(sorted(i for i, v in self.cells.items() if v is True))

    def column_feasible(self, g_index):
        """Whether any cell in one g column is feasible."""
        return any(v is True for i, v in self.cells.items()
                   if i[0] == g_index)

    def feasible_g(self):
        """The g values whose column keeps at least one feasible cell."""
        return tuple(g for gi, g in enumerate(self.g_values)
                     if self.column_feasible(gi))

    def certificate(self, idx):
        """Recompute the exact elimination certificate for one cell.

        Returns the PsdVerdict (pivot list on success, failing leading block
        size on failure). Raises DenominatorZero on indeterminate cells and
        ValueError when the grid was built without keeping its matrix.
        """
        if self.matrix is None:
            raise ValueError("grid carries no symbolic matrix")
        return psd_test_exact(evaluate_matrix(self.matrix, self.point(idx)))

    def rows(self):
        """Yield (g, generator values..., verdict) in grid order."""
        for idx in sorted(self.cells):
            pt = self.point(idx)
            vals = [pt["g"]] + [pt[name] for name, _ in self.axes]
            yield tuple(vals) + (self.cells[idx],)

    def __repr__(self):
        kinds = {True: 0, False: 0, None: 0}
        for v in self.cells.values():
            kinds[v] += 1
        return ("FeasibilityGrid(n=%d, %d points: %d feasible, %d infeasible,"
                " %d indeterminate)" % (self.n, len(self.cells), kinds[True],
                                        kinds[False], kinds[None]))


_METHODS = ("feasible-boundary", "truncation-root", "fit")


class CriticalEstimate:
    """A critical-coupling estimate with its method tag and provenance.

    g_c is exact (a rational) when the method produced one, a float when it
    came from bisection or fitting, and None when no boundary was found in
    the scanned window. n records the matrix size or truncation length the
    estimate came from. note carries the uncertainty statement; trend, for
    feasible-boundary estimates, lists (n, most negative feasible g) pairs
    so the size dependence stays visible.
    """

    __slots__ = ("g_c", "method", "n", "note", "trend")

    def __init__(self, g_c, method, n, note, trend=()):
        if method not in _METHODS:
            raise ValueError("unknown method %r; expected one of %s"
                             % (method, ", ".join(_METHODS)))
        self.g_c = g_c
        self.method = method
        self.n = n
        self.note = note
        self.trend = tuple(trend)

    def __repr__(self):
        return ("CriticalEstimate(g_c=%s, method=%r, n=%s, note=%r)"
                % (self.g_c, self.method, self.n, self.note))


class ExponentFit:
    """Result of fitting value ~ offset + slope*d + amplitude*d**power with
    d = |g - g_c|.

    The linear background term absorbs the regular part of the data so the
    power term can pick up the leading singular correction. residual is the
    root-mean-square misfit. level records the level-curve constraint the
    points were extracted under, if any. gamma = 1 - power is the
    susceptibility reading of the fitted power for planar moment data,
    whose second free-energy derivative carries power - 1.
    """

    __slots__ = ("g_c", "offset", "slope", "amplitude", "power", "residual",
                 "level", "gamma")

    def __init__(self, g_c, offset, slope, amplitude, power, residual,
                 level=None):
        self.g_c = g_c
        self.offset = offset
        self.slope = slope
        self.amplitude = amplitude
        self.power = power
        self.residual = residual
        self.level = level
        self.gamma = 1.0 - power

    def __repr__(self):
        return ("ExponentFit(g_c=%s, power=%.6g, amplitude=%.6g, "
                "offset=%.6g, slope=%.6g, residual=%.3g, level=%r)"
                % (self.g_c, self.power, self.amplitude, self.offset,
                   self.slope, self.residual, self.level))


def _normalize_axes(model, axes):
    """Axes as ((name, values), ...) in the model's generator order."""
    names = model.generator_names()
    if isinstance(axes, dict):
        extra = set(axes) - set(names)
        if extra:
            raise ValueError("unknown generator axes %s" % sorted(extra))
        missing = [nm for nm in names if nm not in axes]
        if missing:
            raise ValueError("missing generator axes %s" % missing)
        return tuple((nm, tuple(axes[nm])) for nm in names)
    pairs = tuple((nm, tuple(vals)) for nm, vals in axes)
    if tuple(nm for nm, _ in pairs) != names:
        raise ValueError("axes must cover generators %s in declaration order"
                         % (list(names),))
    return pairs


def feasible_at(model, table, n, point, rows=None, matrix=None):
    """Exact feasibility verdict at one substitution point.

    Returns True, False, or None (indeterminate: a closed-form denominator
    vanishes at the point, as every moment's does at g = 0).
    """
    if matrix is None:
        matrix = build_hankel(model, table, n, rows=rows)
    try:
        values = evaluate_matrix(matrix, point)
    except DenominatorZero:
        return None
    return bool(psd_test_exact(values))


def scan_region(model, table, n, g_values, axes=(), rows=None, matrix=None,
                within=None):
    """Exact feasibility of the size-n moment matrix over a product grid.

    g_values is the coupling axis; axes maps each free generator symbol to
    its value sequence, in the model's declaration order (a dict or a pair
    sequence; empty for models with no free generator). Cells where a
    denominator vanishes come back indeterminate (None), not infeasible.

    within, when given, is a grid already scanned at a smaller size on the
    same points. Its infeasible and indeterminate cells are inherited
    without retesting: the smaller matrix is a leading principal block of
    the larger one, so feasibility only shrinks as n grows. Only cells
    feasible in within are retested, which keeps growing-n rescans near the
    cost of the surviving band.

    matrix overrides the symbolic matrix (rows is forwarded to build_hankel
    otherwise, and n must equal the override's size).
    """
    pairs = _normalize_axes(model, axes)
    if matrix is None:
        matrix = build_hankel(model, table, n, rows=rows)
    elif len(matrix) != n:
        raise ValueError("matrix override is %dx%d but n=%d"
                         % (len(matrix), len(matrix), n))
    g_values = tuple(g_values)
    if within is not None:
        if within.g_values != g_values or within.axes != pairs:
            raise ValueError("within grid was scanned on different points")
        if within.n > n:
            raise ValueError("within grid has n=%d > %d" % (within.n, n))
    cells = {}
    ranges = [range(len(vals)) for _, vals in pairs]
    for gi, g in enumerate(g_values):
        for rest in product(*ranges):
            idx = (gi,) + rest
            if within is not None and within.cells[idx] is not True:
                cells[idx] = within.cells[idx]
                continue
            pt = {"g": g}
            for (name, vals), k in zip(pairs, rest):
                pt[name] = vals[k]
            cells[idx] = feasible_at(model, table, n, pt, matrix=matrix)
    return FeasibilityGrid(model, n, g_values, pairs, cells, matrix)


def feasible_interval(grid, g_index, axis=0):
    """Feasible range of one generator axis inside a g column.

    Every other generator axis must be pinned to a single value (a level
    constraint). Returns (lo, hi) in axis values, or None when the column
    has no feasible cell. A gap in the feasible cells raises ValueError,
    since then a single interval misrepresents the slice.
    """
    for j, (name, vals) in enumerate(grid.axes):
        if j != axis and len(vals) != 1:
            raise ValueError("axis %s has %d values; fix it to one level"
                             % (name, len(vals)))
    name, vals = grid.axes[axis]
    ks = sorted(i[1 + axis] for i, v in grid.cells.items()
                if i[0] == g_index and v is True)
    if not ks:
        return None
    if ks != list(range(ks[0], ks[-1] + 1)):
        raise ValueError("feasible cells along %s are not contiguous at "
                         "g index %d" % (name, g_index))
    return vals[ks[0]], vals[ks[-1]]


def boundary_points(grid, axis=0, edge="upper"):
    """(g, extreme feasible axis value) pairs for exponent fitting.

    edge selects which end of each column's feasible interval is reported;
    columns with no feasible cell are skipped.
    """
    if edge not in ("upper", "lower"):
        raise ValueError("edge must be 'upper' or 'lower', got %r" % (edge,))
    out = []
    for gi, g in enumerate(grid.g_values):
        iv = feasible_interval(grid, gi, axis)
        if iv is None:
            continue
        out.append((g, iv[1] if edge == "upper" else iv[0]))
    return tuple(out)


def estimate_critical_point(grids):
    """Feasible-boundary critical estimate from grids at increasing n.

    All grids must cover the same points. Feasible cells must be nested
    (anything feasible at a larger n is feasible at every smaller n); a
    violation raises ValueError, since exact arithmetic leaves no rounding
    excuse and non-nested scans mean a bug. The estimate is the most
    negative g whose column keeps a feasible cell at the largest n. No
    extrapolation is attempted: when the most negative scanned g is itself
    feasible the boundary lies outside the window and g_c is None.
    """
    grids = sorted(grids, key=lambda G: G.n)
    if not grids:
        raise ValueError("no grids given")
    base = grids[0]
    for G in grids[1:]:
        if G.g_values != base.g_values or G.axes != base.axes:
            raise ValueError("grids cover different points")
    for small, big in zip(grids, grids[1:]):
        if small.n >= big.n:
            raise ValueError("matrix sizes must strictly increase, got "
                             "%d then %d" % (small.n, big.n))
        for idx, v in big.cells.items():
            if v is True and small.cells[idx] is not True:
                raise ValueError(
                    "feasible sets not nested: cell %r is feasible at n=%d "
                    "but not at n=%d" % (idx, big.n, small.n))
    trend = []
    for G in grids:
        feas = G.feasible_g()
        trend.append((G.n, min(feas) if feas else None))
    largest = grids[-1]
    feas = largest.feasible_g()
    trend_text = "; ".join("n=%d -> %s" % (n, g) for n, g in trend)
    if not feas:
        return CriticalEstimate(
            None, "feasible-boundary", largest.n,
            "none found: no feasible cells in the window (%s)" % trend_text,
            trend)
    g_min = min(feas)
    if g_min == min(largest.g_values):
        return CriticalEstimate(
            None, "feasible-boundary", largest.n,
            "none found: feasible down to the window edge g=%s (%s)"
            % (g_min, trend_text), trend)
    below = max(g for g in largest.g_values if g < g_min)
    return CriticalEstimate(
        g_min, "feasible-boundary", largest.n,
        "most negative feasible g at n=%d; no feasible cell at the next "
        "column g=%s; %s" % (largest.n, below, trend_text), trend)


def refine_boundary(model, table, grid, rounds=3):
    """Tighten the feasible-boundary bracket by dyadic bisection.

    Takes the most negative feasible g column and its infeasible neighbour,
    then rescans the full generator-axis product at the midpoint coupling,
    halving the bracket each round (midpoints of dyadic endpoints stay
    dyadic). Returns (lo, hi) with hi's slice feasible and lo's not.
    """
    feas = grid.feasible_g()
    if not feas:
        raise ValueError("no feasible column to refine against")
    hi = min(feas)
    lower = [g for g in grid.g_values if g < hi]
    if not lower:
        raise ValueError("boundary is outside the window; nothing to refine")
    lo = max(lower)
    matrix = grid.matrix
    if matrix is None:
        matrix = build_hankel(model, table, grid.n)
    combos = list(product(*[vals for _, vals in grid.axes]))
    names = [name for name, _ in grid.axes]
    for _ in range(rounds):
        mid = (lo + hi) / 2
        ok = False
        for combo in combos:
            pt = {"g": mid}
            pt.update(zip(names, combo))
            if feasible_at(model, table, grid.n, pt, matrix=matrix) is True:
                ok = True
                break
        if ok:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


def quartic_analytic(g):
    """One-matrix quartic planar data at coupling g: (a, m2, m4, dF0/dg).

    a solves 3*g*a**2 + a - 1 = 0 on the branch with a(0) = 1, so
    a = (sqrt(1 + 12g) - 1)/(6g) away from zero. Even moments follow
    m_{2l} = a**l * (2l)!/(l! (l+2)!) * (2l + 2 - l*a), and the free-energy
    derivative is -m4/4, matching free_energy_derivative's sign convention.
    Results are exact rationals when 1 + 12g is a rational square and
    floats otherwise. Raises ValueError below the critical coupling, where
    1 + 12g < 0 and no real branch exists.
    """
    g = rat(g)
    disc = 1 + 12 * g
    if disc < 0:
        raise ValueError("no real branch: 1 + 12g < 0 at g = %s" % g)
    if g == 0:
        a = mpq(1)
    else:
        root = _rational_sqrt(disc)
        if root is not None:
            a = (root - 1) / (6 * g)
        else:
            a = (math.sqrt(float(disc)) - 1.0) / (6.0 * float(g))
    m2 = a * (4 - a) / 3
    m4 = a * a * (3 - a)
    return a, m2, m4, -m4 / 4


def quartic_curve(a):
    """Exact quartic branch point parameterized by rational a in (0, 2].

    Inverts the branch equation: g = (1 - a)/(3*a**2) is rational whenever
    a is, and quartic_analytic at that g returns exactly this a. Returns
    (g, m2, m4, dF0/dg), all rational, so scans can be checked against the
    analytic curve without any floating point.
    """
    a = rat(a)
    if not 0 < a <= 2:
        raise ValueError("branch parameter must be in (0, 2], got %s" % a)
    g = (1 - a) / (3 * a * a)
    m2 = a * (4 - a) / 3
    m4 = a * a * (3 - a)
    return g, m2, m4, -m4 / 4


def quartic_curvature(g):
    """Second derivative of the quartic planar free energy, d2F0/dg2.

    Differentiating dF0/dg = -m4/4 = -a**2 (3 - a)/4 through the branch
    parameter, with dg/da = (a - 2)/(3 a**3) from g = (1 - a)/(3 a**2),
    collapses to the closed form 9 a**4 / 4. It is finite and positive on
    the whole branch, equal to 9/4 at g = 0 and 36 at the critical
    coupling, and its singular correction carries the exponent 1/2 that
    exponent fits read the susceptibility from. Exact when a is rational
    at g, a float otherwise, like quartic_analytic.
    """
    a = quartic_analytic(g)[0]
    return 9 * a ** 4 / 4


def _coeffs_in(poly, name):
    """Coefficient polynomials of poly in one variable, degree 0 upward."""
    vi = poly.vars.index(name)
    buckets = [dict() for _ in range(poly.degree_in(name) + 1)]
    for e, c in poly.terms.items():
        flat = e[:vi] + (0,) + e[vi + 1:]
        buckets[e[vi]][flat] = c
    return [Poly(poly.vars, b) for b in buckets]


def _bareiss_det(rows):
    """Fraction-free determinant of a square matrix of polynomials."""
    A = [list(r) for r in rows]
    k = len(A)
    sign = 1
    prev = None
    for r in range(k - 1):
        if A[r][r].is_zero():
            for i in range(r + 1, k):
                if not A[i][r].is_zero():
                    A[r], A[i] = A[i], A[r]
                    sign = -sign
                    break
            else:
                return Poly(A[0][0].vars)
        for i in range(r + 1, k):
            for j in range(r + 1, k):
                t = A[i][j] * A[r][r] - A[i][r] * A[r][j]
                A[i][j] = t if prev is None else exact_div(t, prev)
            A[i][r] = Poly(A[i][r].vars)
        prev = A[r][r]
    det = A[k - 1][k - 1]
    return -det if sign < 0 else det


def _resultant_in(p, q, name):
    """Sylvester resultant of p and q with respect to one variable."""
    a = _coeffs_in(p, name)[::-1]
    b = _coeffs_in(q, name)[::-1]
    m, n = len(a) - 1, len(b) - 1
    zero = Poly(p.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (m - 1 - i))
    return _bareiss_det(rows)


def _poly_sign(poly, g):
    point = {name: mpq(0) for name in poly.vars}
    point["g"] = mpq(g)
    v = poly.evaluate(point)
    return (v > 0) - (v < 0)


def numerator_discriminant(num, var):
    """Discriminant of a moment numerator in one generator variable.

    Computed exactly as the Sylvester resultant of the numerator and its
    derivative, divided by the leading coefficient. Up to a conventional
    sign this is the classical discriminant; its roots in g are the only
    couplings where real roots in var can appear, merge, or vanish.
    """
    degree = num.degree_in(var)
    if degree < 2:
        raise ValueError("numerator is degree %d in %s; a real root always "
                         "exists" % (degree, var))
    vi = num.vars.index(var)
    dterms = {}
    for e, c in num.terms.items():
        if e[vi]:
            dterms[e[:vi] + (e[vi] - 1,) + e[vi + 1:]] = c * e[vi]
    deriv = Poly(num.vars, dterms)
    res = _resultant_in(num, deriv, var)
    lead = _coeffs_in(num, var)[-1]
    disc = exact_div(res, lead)
    return res if disc is None else disc


def bisect_sign_change(poly, lo, hi, depth=60):
    """Narrow a sign change of a univariate-in-g polynomial by bisection.

    lo and hi are rationals with poly of opposite (nonzero) signs; returns
    the final (lo, hi) bracket after depth rounds, endpoints exact. An
    endpoint evaluating to zero is returned as a degenerate exact bracket.
    """
    lo, hi = rat(lo), rat(hi)
    s_lo, s_hi = _poly_sign(poly, lo), _poly_sign(poly, hi)
    if s_lo == 0:
        return lo, lo
    if s_hi == 0:
        return hi, hi
    if s_lo == s_hi:
        raise ValueError("no sign change between %s and %s" % (lo, hi))
    for _ in range(depth):
        mid = (lo + hi) / 2
        sm = _poly_sign(poly, mid)
        if sm == 0:
            return mid, mid
        if sm == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _walk_branch(coeff_polys, guide, g_start, g_stop, step):
    """Follow one real root of a parameterized polynomial numerically.

    coeff_polys hold the var coefficients (degree 0 upward) as polynomials
    in g. Starting from the root nearest guide at g_start, move g toward
    g_stop in the given step, matching the nearest real root each time.
    Returns (g_alive, g_dead) when the tracked root disappears or jumps
    away (the fold lies between them), or None when it survives to g_stop.
    """
    import numpy

    def roots_at(g):
        cs = []
        for p in coeff_polys:
            point = {name: mpq(0) for name in p.vars}
            point["g"] = g
            cs.append(float(p.evaluate(point)))
        while cs and cs[-1] == 0.0:
            cs.pop()
        if len(cs) < 2:
            return []
        rr = numpy.roots(cs[::-1])
        return [z.real for z in rr if abs(z.imag) < 1e-8]

    g = rat(g_start)
    cand = roots_at(g)
    if not cand:
        raise ValueError("no real branch at g = %s" % g)
    current = min(cand, key=lambda x: abs(x - guide))
    if abs(current - guide) > 0.25:
        raise ValueError("cannot identify the branch: nearest root %.4f is "
                         "far from the series value %.4f" % (current, guide))
    direction = 1 if g_stop > g_start else -1
    while (g - g_stop) * direction < 0:
        g_next = g + direction * step
        cand = roots_at(g_next)
        near = min(cand, key=lambda x: abs(x - current)) if cand else None
        if near is None or abs(near - current) > 0.3:
            return g, g_next
        g, current = g_next, near
    return None


def truncation_critical(table, word, var=None, window=rat("1/4"), depth=60):
    """Critical estimate from the fold of one moment numerator's branch.

    Setting a short-word moment to zero approximates the relationship
    between g and the free generator moment near g = 0, since such moments
    vanish to a known order there. The estimate is the coupling where the
    solution branch through the perturbative value stops being real, which
    is a root of the numerator's discriminant in the generator variable.

    A linear discriminant pins the boundary exactly (there is only one
    candidate fold). Otherwise the relevant discriminant root is selected
    by following the branch numerically from small negative g (then small
    positive g if no fold is found) and is then narrowed by exact rational
    bisection for depth rounds, with the final bracket in the note.
    Raises ValueError when the numerator does not involve exactly one free
    generator or no fold exists with |g| <= window.
    """
    w = Word.parse(word) if isinstance(word, str) else word
    num = table.lookup(w).num
    gens = [nm for nm in table.vars if nm != "g" and num.degree_in(nm) > 0]
    if not gens:
        raise ValueError("numerator of the %s moment is independent of "
                         "every generator moment" % str(w))
    if len(gens) > 1:
        raise ValueError("numerator involves %s; a one-variable root "
                         "boundary is not defined" % ", ".join(gens))
    if var is None:
        var = gens[0]
    elif var != gens[0]:
        raise ValueError("numerator does not involve %s" % var)
    disc = numerator_discriminant(num, var)
    gdeg = disc.degree_in("g")
    if gdeg == 0:
        raise ValueError("discriminant is constant in g; no boundary")
    if gdeg == 1:
        lin = _coeffs_in(disc, "g")
        g_c = -lin[0].const_value() / lin[1].const_value()
        return CriticalEstimate(
            g_c, "truncation-root", len(w),
            "exact: the discriminant in %s is linear in g" % var)

    from .series import expand_moments

    names = table.model.generator_names()
    gen_word = table.model.generators[names.index(var)]
    series = expand_moments(table.model, 6).series(gen_word, 6)
    coeff_polys = _coeffs_in(num, var)
    step = window / 512
    for side in (-1, 1):
        g_start = side * step
        guide = float(sum(c * float(g_start) ** k
                          for k, c in enumerate(series.coeffs)))
        hit = _walk_branch(coeff_polys, guide, g_start, side * window, step)
        if hit is None:
            continue
        alive, dead = hit
        for attempt in range(3):
            try:
                lo, hi = bisect_sign_change(disc, dead, alive, depth)
                break
            except ValueError:
                alive, dead = dead, dead + (dead - alive)
        else:
            raise ValueError("branch fold near [%s, %s] is not a sign "
                             "change of the discriminant" % (dead, alive))
        if lo == hi:
            return CriticalEstimate(
                lo, "truncation-root", len(w),
                "exact: discriminant root found by bisection")
        pair = tuple(sorted((lo, hi)))
        return CriticalEstimate(
            float((lo + hi) / 2), "truncation-root", len(w),
            "fold of the branch through the perturbative value; "
            "discriminant sign change inside [%s, %s]" % pair)
    raise ValueError("no branch fold found for |g| <= %s" % window)


def fit_exponent(points, g_c, fit_gc=False, p_grid=(0.25, 0.5, 0.75, 1.0,
                                                    1.25, 1.5, 1.75),
                 level=None):
    """Least-squares fit of value ~ offset + slope*d + amplitude*d**power,
    d = |g - g_c|, on boundary points (g, value).

    g_c is held fixed by default; with fit_gc it is the initial guess for a
    fitted g_c, which must then start outside the data's g range and stays
    on that side. The power is multi-started over p_grid with a linear
    solve seeding the other coefficients, and the lowest-cost trust-region
    solution wins; there is no randomness, so refits are deterministic.
    Values are pre-scaled by a power of two so rescaled inputs refit to
    exactly rescaled coefficients with the same power.

    Raises ValueError with fewer points than parameters or when the g
    values are not strictly monotone. level is an opaque tag recording the
    level-curve constraint the points came from. Returns an ExponentFit;
    its gamma = 1 - power.
    """
    import numpy
    from scipy.optimize import least_squares

    pts = [(float(g), float(v)) for g, v in points]
    nparams = 5 if fit_gc else 4
    if len(pts) < nparams:
        raise ValueError("need at least %d points to fit %d parameters"
                         % (nparams, nparams))
    gs = numpy.array([g for g, _ in pts])
    steps = numpy.diff(gs)
    if not ((steps > 0).all() or (steps < 0).all()):
        raise ValueError("g values must be strictly monotone")
    values = numpy.array([v for _, v in pts])
    peak = float(numpy.max(numpy.abs(values)))
    scale = 2.0 ** math.frexp(peak)[1] if peak else 1.0
    scaled = values / scale

    gc0 = float(g_c)
    lo_g, hi_g = float(gs.min()), float(gs.max())
    if fit_gc:
        if lo_g < gc0 < hi_g:
            raise ValueError("g_c guess %s lies inside the data range" % g_c)
        if gc0 >= hi_g:
            gc_bounds = (hi_g, math.inf)
        else:
            gc_bounds = (-math.inf, lo_g)

    def residual(theta):
        c0, c1, c2, p = theta[:4]
        gc = theta[4] if fit_gc else gc0
        d = numpy.abs(gs - gc)
        return c0 + c1 * d + c2 * d ** p - scaled

    best = None
    for p0 in p_grid:
        d0 = numpy.abs(gs - gc0)
        design = numpy.column_stack([numpy.ones_like(d0), d0, d0 ** p0])
        c, *_ = numpy.linalg.lstsq(design, scaled, rcond=None)
        theta0 = [c[0], c[1], c[2], p0]
        lower = [-math.inf, -math.inf, -math.inf, 0.05]
        upper = [math.inf, math.inf, math.inf, 4.0]
        if fit_gc:
            theta0.append(gc0)
            lower.append(gc_bounds[0])
            upper.append(gc_bounds[1])
        res = least_squares(residual, theta0, bounds=(lower, upper),
                            method="trf", xtol=1e-15, ftol=1e-15,
                            gtol=1e-15, max_nfev=4000)
        if best is None or res.cost < best.cost:
            best = res
    c0, c1, c2, p = best.x[:4]
    rms = float(numpy.sqrt(numpy.mean(best.fun ** 2))) * scale
    out_gc = float(best.x[4]) if fit_gc else g_c
    return ExponentFit(out_gc, float(c0) * scale, float(c1) * scale,
                       float(c2) * scale, float(p), rms, level=level)
