"""Convex semilinear sets as partitions of a closed hull into open cells.

A Cell is a relatively open polyhedron: equalities plus strict inequalities,
equal to the relative interior of its closure.  A CellSet carves the closed
hull P of a set into cells with an inclusion flag per cell; the set is the
union of the included cells and P is exactly its closure.

Canonicalization takes an arbitrary union of constraint conjunctions,
refines the hull by the sign-vector arrangement of every hyperplane that
occurs (plus the hull's own facets), decides each region by one rational
sample, rejects non-convex unions with an exact witness segment, and merges
the included regions into maximal relatively open cells.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from . import interval, lp, polyhedron as ph
from .linalg import ONE, Vec, ZERO, frac, sign_normalized, vdot, zero_vec
from .lp import EQ, LE, LT, LinConstraint
from .polyhedron import HPolyhedron, Row

DEFAULT_MAX_HYPERPLANES = 24


class NotConvexError(Exception):
    """The union of the pieces is not convex; carries (x, y, midpoint)."""

    def __init__(self, x: Vec, y: Vec, mid: Vec):
        super().__init__(f"union not convex: {mid} lies between {x} and {y}")
        self.witness = (x, y, mid)


class ResourceLimitError(Exception):
    """Arrangement would exceed the configured hyperplane cap."""


class Cell:
    """Nonempty relatively open polyhedron with a cached interior sample."""

    __slots__ = ("dim", "equalities", "stricts", "sample", "_closure", "_cons")

    def __init__(self, dim: int, equalities: tuple[Row, ...],
                 stricts: tuple[Row, ...], sample: Vec):
        self.dim = dim
        self.equalities = equalities
        self.stricts = stricts
        self.sample = sample
        self._closure = None
        self._cons = None

    def __repr__(self):
        return f"Cell(dim={self.dim}, eqs={len(self.equalities)}, " \
               f"stricts={len(self.stricts)})"

    def closure(self) -> HPolyhedron:
        # cell rows are already a polyhedral normal form; skip re-normalizing
        if self._closure is None:
            h = HPolyhedron(self.dim, self.equalities, self.stricts,
                            _normalized=True)
            h._relint = self.sample
            self._closure = h
        return self._closure

    def constraints(self) -> tuple[LinConstraint, ...]:
        if self._cons is None:
            self._cons = tuple(
                [LinConstraint(a, EQ, b) for a, b in self.equalities]
                + [LinConstraint(a, LT, b) for a, b in self.stricts])
        return self._cons

    def contains(self, x: Vec) -> bool:
        return (all(vdot(a, x) == b for a, b in self.equalities)
                and all(vdot(a, x) < b for a, b in self.stricts))

    def key(self):
        return (self.dim - len(self.equalities), self.equalities, self.stricts)

    def interval_on_line(self, p: Vec, d: Vec) -> interval.Interval | None:
        """{t : p + t d in cell} as an exact interval."""
        rows = []
        for a, b in self.equalities:
            rows.append((vdot(a, d), EQ, b - vdot(a, p)))
        for a, b in self.stricts:
            rows.append((vdot(a, d), LT, b - vdot(a, p)))
        return interval.from_rows(rows)


def cell_from_closure(c: HPolyhedron, sample: Vec | None = None) -> Cell:
    """The relative interior of a nonempty polyhedron, as a cell."""
    if c.is_empty:
        raise ph.EmptyPolyhedronError("cannot take the cell of an empty polyhedron")
    if sample is None:
        sample = ph.relint_point(c)
    return Cell(c.dim, c.equalities, c.inequalities, sample)


def cell_from_rows(dim: int, eqs: Sequence[Row], stricts: Sequence[Row],
                   sample: Vec) -> Cell:
    """Canonical cell for a feasible open system, via its closure."""
    closure = ph.hpoly(dim, eqs, stricts)
    assert not closure.is_empty
    return Cell(dim, closure.equalities, closure.inequalities, sample)


class CellSet:
    """A convex semilinear set: hull P, partition into cells, inclusion flags."""

    __slots__ = ("dim", "top", "cells", "included", "is_empty", "_classification")

    def __init__(self, dim: int, top: HPolyhedron, cells: Sequence[Cell],
                 included: Sequence[bool], is_empty: bool = False):
        self.dim = dim
        self.top = top
        order = sorted(range(len(cells)), key=lambda i: cells[i].key())
        self.cells = tuple(cells[i] for i in order)
        self.included = tuple(bool(included[i]) for i in order)
        self.is_empty = is_empty
        self._classification = None

    def membership(self, x: Vec) -> bool:
        if self.is_empty:
            return False
        if len(x) != self.dim:
            raise lp.DimensionMismatch("point of wrong dimension")
        if not self.top.contains(x):
            return False
        for cell, inc in zip(self.cells, self.included):
            if cell.contains(x):
                return inc
        raise AssertionError("cells must partition the hull")

    def included_cells(self) -> list[Cell]:
        return [c for c, inc in zip(self.cells, self.included) if inc]

    def excluded_cells(self) -> list[Cell]:
        return [c for c, inc in zip(self.cells, self.included) if not inc]

    def is_closed_set(self) -> bool:
        return all(self.included)

    def interval_on_line(self, p: Vec, d: Vec) -> list[interval.Interval]:
        """Membership parameter set of the line p + t d, merged intervals."""
        if self.is_empty:
            return []
        pieces = []
        for c in self.included_cells():
            iv = c.interval_on_line(p, d)
            if iv is not None:
                pieces.append(iv)
        return interval.merge(pieces)

    def __repr__(self):
        if self.is_empty:
            return f"CellSet(empty, dim={self.dim})"
        ni = sum(self.included)
        return f"CellSet(dim={self.dim}, cells={len(self.cells)}, included={ni})"


def empty_cellset(dim: int) -> CellSet:
    return CellSet(dim, ph.empty_polyhedron(dim), (), (), is_empty=True)


def cellset_from_polyhedron(p: HPolyhedron) -> CellSet:
    """Canonical closed set: one included cell per face of p."""
    if p.is_empty:
        return empty_cellset(p.dim)
    cells = [cell_from_closure(f) for f in ph.face_lattice(p)]
    return CellSet(p.dim, p, cells, [True] * len(cells))


# -- pieces ------------------------------------------------------------------


Piece = tuple[LinConstraint, ...]


def piece(dim: int, cons: Iterable[LinConstraint]) -> Piece:
    cons = tuple(cons)
    for c in cons:
        if len(c.coeffs) != dim:
            raise lp.DimensionMismatch("piece constraint of wrong arity")
    return cons


def piece_closure(dim: int, p: Piece) -> HPolyhedron:
    eqs = [(c.coeffs, c.rhs) for c in p if c.rel == EQ]
    ineqs = [(c.coeffs, c.rhs) for c in p if c.rel in (LE, LT)]
    return ph.hpoly(dim, eqs, ineqs)


def _point_in_piece(x: Vec, p: Piece) -> bool:
    return all(c.holds(x) for c in p)


# -- arrangement -------------------------------------------------------------


def _hyperplane_key(a: Vec, b: Fraction) -> tuple[Vec, Fraction]:
    ext = sign_normalized(a + (b,))
    return ext[:-1], ext[-1]


def _collect_hyperplanes(dim: int, pieces: Sequence[Piece],
                         hull: HPolyhedron) -> list[tuple[Vec, Fraction]]:
    seen = set()
    for p in pieces:
        for c in p:
            if not all(x == 0 for x in c.coeffs):
                seen.add(_hyperplane_key(c.coeffs, c.rhs))
    for a, b in hull.inequalities:
        seen.add(_hyperplane_key(a, b))
    return sorted(seen)


def _enumerate_regions(dim: int, hull: HPolyhedron,
                       hyperplanes: Sequence[tuple[Vec, Fraction]]):
    """All nonempty sign regions of the hyperplanes within the hull.

    Returns a list of (signs, cell).  A depth-first walk keeps a strictly
    feasible sample per branch so only the other two signs of each new
    hyperplane cost an LP.
    """
    base = hull.constraints()
    start = lp.feasible_with_slack(base, dim)
    regions: list[tuple[tuple[int, ...], Cell]] = []
    if start is None:  # empty hull
        return regions

    def rows_for(signs: Sequence[int]) -> list[LinConstraint]:
        rows = list(base)
        for s, (a, b) in zip(signs, hyperplanes):
            if s == 0:
                rows.append(LinConstraint(a, EQ, b))
            elif s < 0:
                rows.append(LinConstraint(a, LT, b))
            else:
                rows.append(LinConstraint(tuple(-x for x in a), LT, -b))
        return rows

    def walk(k: int, signs: list[int], sample: Vec):
        if k == len(hyperplanes):
            sys_rows = rows_for(signs)
            eqs = [(c.coeffs, c.rhs) for c in sys_rows if c.rel == EQ]
            sts = [(c.coeffs, c.rhs) for c in sys_rows if c.rel == LT]
            regions.append((tuple(signs), cell_from_rows(dim, eqs, sts, sample)))
            return
        a, b = hyperplanes[k]
        val = vdot(a, sample) - b
        free = -1 if val < 0 else (0 if val == 0 else 1)
        for s in (-1, 0, 1):
            if s == free:
                walk(k + 1, signs + [s], sample)
                continue
            res = lp.feasible_with_slack(rows_for(signs + [s]), dim)
            if res is not None:
                walk(k + 1, signs + [s], res[0])

    walk(0, [], start[0])
    return regions


# -- canonicalization ---------------------------------------------------------


def perspective_decompose(m: Vec, c1: Cell, c2: Cell):
    """Exact (lam, s, t) with m = lam*s + (1-lam)*t, s in c1, t in c2.

    Linear in (p, q, lam) after substituting p = lam*s, q = (1-lam)*t;
    solvable precisely when m lies in the open mix of the two cells.
    """
    n = c1.dim
    dim = 2 * n + 1  # p | q | lam
    cons: list[LinConstraint] = []

    def embed(rows, strict, first: bool):
        # row a.x (rel) b  ->  a.p (rel) b*lam      (first block)
        #                      a.q (rel) b*(1-lam)  (second block)
        for a, b in rows:
            if first:
                coeffs = a + zero_vec(n) + (-b,)
                rhs = ZERO
            else:
                coeffs = zero_vec(n) + a + (b,)
                rhs = b
            cons.append(LinConstraint(coeffs, LT if strict else EQ, rhs))

    embed(c1.equalities, False, True)
    embed(c1.stricts, True, True)
    embed(c2.equalities, False, False)
    embed(c2.stricts, True, False)
    for i in range(n):  # p + q = m
        coeffs = tuple(ONE if j == i or j == n + i else ZERO for j in range(dim))
        cons.append(LinConstraint(coeffs, EQ, m[i]))
    lam_row = zero_vec(2 * n) + (ONE,)
    cons.append(LinConstraint(tuple(-x for x in lam_row), LT, ZERO))   # lam > 0
    cons.append(LinConstraint(lam_row, LT, ONE))                       # lam < 1
    pt = lp.strictly_feasible(cons, dim)
    if pt is None:
        return None
    lam = pt[2 * n]
    s = tuple(x / lam for x in pt[:n])
    t = tuple(x / (ONE - lam) for x in pt[n:2 * n])
    return lam, s, t


def _strict_sample(rows: Sequence[LinConstraint], dim: int) -> Vec | None:
    return lp.strictly_feasible(rows, dim)


def canonicalize(dim: int, pieces: Sequence[Piece],
                 max_hyperplanes: int = DEFAULT_MAX_HYPERPLANES,
                 assume_convex: bool = False) -> CellSet:
    """Canonical CellSet of the union of the pieces, or NotConvexError.

    assume_convex skips the pairwise convexity check; callers may set it
    only when convexity of the union is guaranteed (images, preimages,
    intersections and limits of convex sets).
    """
    live: list[Piece] = []
    for p in pieces:
        if lp.is_feasible(list(p), dim):
            live.append(p)
    if not live:
        return empty_cellset(dim)

    hull = ph.convex_hull_union([piece_closure(dim, p) for p in live])

    hyperplanes = _collect_hyperplanes(dim, live, hull)
    if len(hyperplanes) > max_hyperplanes:
        raise ResourceLimitError(
            f"{len(hyperplanes)} hyperplanes exceed the cap {max_hyperplanes}")
    regions = _enumerate_regions(dim, hull, hyperplanes)
    flags = [any(_point_in_piece(cell.sample, p) for p in live)
             for _, cell in regions]
    if not assume_convex:
        _convexity_check(dim, hull, regions, flags)
    # the union is convex, so the hull of the pieces is already its closure
    inc_cells = [cell for (s, cell), f in zip(regions, flags) if f]
    new_hull = ph.convex_hull_union([c.closure() for c in inc_cells])
    assert new_hull == hull, "a convex union fills the hull of its pieces"

    included = _merge_included(dim, hull, inc_cells)
    excluded = [cell for (s, cell), f in zip(regions, flags) if not f]
    cells = included + excluded
    flags_out = [True] * len(included) + [False] * len(excluded)
    return CellSet(dim, hull, cells, flags_out)


def convexity_witness(s: CellSet):
    """Re-verify the convexity invariant of a CellSet.

    Returns None when every open mix of two included cells avoids every
    excluded cell, else the exact witness (x, y, midpoint)."""
    if s.is_empty:
        return None
    inc = s.included_cells()
    exc = s.excluded_cells()
    if not exc:
        return None
    try:
        _convexity_check(s.dim, s.top,
                         [((), c) for c in inc] + [((), e) for e in exc],
                         [True] * len(inc) + [False] * len(exc))
    except NotConvexError as e:
        return e.witness
    return None


def _convexity_check(dim, hull, regions, flags):
    """Every open mix of two included regions must avoid every excluded one."""
    inc = [cell for (_, cell), f in zip(regions, flags) if f]
    exc = [cell for (_, cell), f in zip(regions, flags) if not f]
    if not exc:
        return
    relint_hull_rows = ph.relint_constraints(hull)
    for i, c1 in enumerate(inc):
        for c2 in inc[i + 1:]:
            mix_hull = ph.convex_hull_union([c1.closure(), c2.closure()])
            if mix_hull == hull:
                mix_rows = relint_hull_rows
            else:
                mix_rows = ph.relint_constraints(mix_hull)
            for e in exc:
                m = _strict_sample(list(e.constraints()) + mix_rows, dim)
                if m is None:
                    continue
                dec = perspective_decompose(m, c1, c2)
                assert dec is not None, "mix membership must decompose"
                _, s, t = dec
                raise NotConvexError(s, t, m)


def _merge_included(dim: int, hull: HPolyhedron, regions: list[Cell]) -> list[Cell]:
    """Merge included regions into maximal relatively open cells.

    The union of the regions is convex; its trace on the relative interior
    of each face of its hull is the relative interior of a polyhedron, found
    recursively (the dimension drops at every level).
    """
    out: list[Cell] = []
    stack: list[list[Cell]] = [regions]
    while stack:
        regs = stack.pop()
        c = ph.convex_hull_union([r.closure() for r in regs])
        top = cell_from_closure(c)
        out.append(top)
        rest = [r for r in regs if not top.contains(r.sample)]
        if not rest:
            continue
        buckets: dict[int, list[Cell]] = {}
        faces = ph.proper_faces(c)
        for r in rest:
            fi = _minimal_face_index(faces, c, r.sample)
            buckets.setdefault(fi, []).append(r)
        for fi in sorted(buckets):
            stack.append(buckets[fi])
    return out


def _minimal_face_index(faces: list[HPolyhedron], c: HPolyhedron, x: Vec) -> int:
    mf = ph.minimal_face_containing(c, x)
    for i, f in enumerate(faces):
        if f == mf:
            return i
    raise AssertionError("minimal face must appear in the face lattice")


# -- set predicates ------------------------------------------------------------


def separating_point(s: CellSet, t: CellSet) -> Vec | None:
    """An exact point of s that is not in t, or None when s is a subset.

    Searched cell by cell: a point of an included cell of s that violates a
    hull row of t or lands in an excluded cell of t.
    """
    if s.dim != t.dim:
        raise lp.DimensionMismatch("comparing sets of different dimensions")
    if s.is_empty:
        return None
    if t.is_empty:
        return s.included_cells()[0].sample
    violations: list[LinConstraint] = []
    for a, b in t.top.equalities:
        violations.append(LinConstraint(a, LT, b))                      # a.x < b
        violations.append(LinConstraint(tuple(-x for x in a), LT, -b))  # a.x > b
    for a, b in t.top.inequalities:
        violations.append(LinConstraint(tuple(-x for x in a), LT, -b))  # a.x > b
    excluded = [list(e.constraints()) for e in t.excluded_cells()]
    for c in s.included_cells():
        rows = list(c.constraints())
        for v in violations:
            z = lp.strictly_feasible(rows + [v], s.dim)
            if z is not None:
                return z
        for e_rows in excluded:
            z = lp.strictly_feasible(rows + e_rows, s.dim)
            if z is not None:
                return z
    return None


def subset(s: CellSet, t: CellSet) -> bool:
    """Exact containment of the denoted sets."""
    return separating_point(s, t) is None


def equal(s: CellSet, t: CellSet) -> bool:
    return subset(s, t) and subset(t, s)


def closure(s: CellSet) -> CellSet:
    if s.is_empty:
        return s
    return cellset_from_polyhedron(s.top)


def sample_points(s: CellSet, density: int) -> list[Vec]:
    """Interior samples of all included cells plus a membership-filtered grid."""
    if s.is_empty:
        raise ph.EmptyPolyhedronError("cannot sample the empty set")
    if density < 1:
        raise ValueError("density must be positive")
    pts = {c.sample for c in s.included_cells()}
    verts, rays, _lines = s.top.generators()
    los, his = [], []
    for i in range(s.dim):
        coords = [v[i] for v in verts]
        lo, hi = min(coords), max(coords)
        for r in rays:
            if r[i] < 0:
                lo -= 1
            if r[i] > 0:
                hi += 1
        for l in _lines:
            if l[i] != 0:
                lo -= 1
                hi += 1
        los.append(lo)
        his.append(hi)
    step = frac(1) / density

    def axis(i):
        t = los[i]
        start = frac(ceil(los[i] * density)) / density
        vals = []
        v = start
        while v <= his[i]:
            vals.append(v)
            v += step
        return vals

    grids = [axis(i) for i in range(s.dim)]

    def rec(i, cur):
        if i == s.dim:
            x = tuple(cur)
            if s.membership(x):
                pts.add(x)
            return
        for v in grids[i]:
            rec(i + 1, cur + [v])

    rec(0, [])
    return sorted(pts)
