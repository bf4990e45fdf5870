"""Geometric classification of convex semilinear sets into six classes.

The class of a set is decided by four exact predicates:

  * does it admit a line meeting it in exactly an open/closed half-line
    (a "ray cut"),
  * is it a bounded set plus a translation subspace,
  * does it have a dent: a point outside the set that mixes an inner point
    with a closure point,
  * is it closed.

Every positive answer returns a certifying witness that re-verifies by
exact arithmetic alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Optional

from . import lp, polyhedron as ph
from .cells import Cell, CellSet, cell_from_closure, perspective_decompose
from .linalg import Vec, ZERO, ONE, is_zero, nullspace, vadd, vdot, vscale, vsub, zero_vec
from .lp import EQ, LE, LT, LinConstraint


class ConvexClass(IntEnum):
    AFFINE = 1              # empty or an affine subspace
    COMPACT_SUM = 2         # compact set plus subspace, not affine
    OPEN_BOUNDED = 3        # bounded-mod-subspace, not closed, no dent
    DENTED_BOUNDED = 4      # bounded-mod-subspace with a dent
    UNBOUNDED_NO_RAY = 5    # not bounded-mod-subspace, no ray cut
    RAY = 6                 # admits a ray cut


RECESSION_EXCEEDS_LINEALITY = "recession_exceeds_lineality"
NOT_TRANSLATION_INVARIANT = "not_translation_invariant"

EXITS_HULL = "exits_hull"
EXCLUDED_CELL = "excluded_cell"


@dataclass(frozen=True)
class InnerSpaceResult:
    """Basis of the translation subspace of the closure."""

    basis: tuple[Vec, ...]

    def verify(self, s: CellSet) -> bool:
        u = ph.relint_point(s.top)
        hull = s.top
        return all(hull.contains(vadd(u, v)) and hull.contains(vsub(u, v))
                   for v in self.basis)


@dataclass(frozen=True)
class BoundedDecomposition:
    """S = (bounded section) + span(basis); the section fits in a ball."""

    basis: tuple[Vec, ...]
    radius_sq: Fraction

    def verify(self, s: CellSet) -> bool:
        sec = _orthogonal_section(s.top, self.basis)
        verts, rays, lines = sec.generators()
        return not rays and not lines and all(vdot(v, v) <= self.radius_sq
                                              for v in verts)


@dataclass(frozen=True)
class NotDecomposable:
    reason: str
    witness_point: Optional[Vec] = None      # in S with point + shift outside
    witness_shift: Optional[Vec] = None
    witness_direction: Optional[Vec] = None  # recession direction, no line


@dataclass(frozen=True)
class DentWitness:
    """a = lam*s + (1-lam)*t lies outside the set; s inside, t in the closure."""

    point: Vec
    lam: Fraction
    inner: Vec      # s, in an included cell
    closure_pt: Vec  # t, in the closure
    cell_index: int
    face: ph.HPolyhedron

    def verify(self, s: CellSet) -> bool:
        if s.membership(self.point):
            return False
        if not (0 < self.lam < 1):
            return False
        mix = vadd(vscale(self.lam, self.inner),
                   vscale(ONE - self.lam, self.closure_pt))
        return (mix == self.point and s.membership(self.inner)
                and s.top.contains(self.closure_pt))


@dataclass(frozen=True)
class RayWitness:
    """base + t*direction is in the set for all t > 0 and outside for t < 0."""

    base: Vec
    direction: Vec
    tail_cell: int
    mode: str
    excluded_index: Optional[int] = None

    def verify(self, s: CellSet) -> bool:
        # the membership parameters of the witness line must form exactly the
        # half-line starting at the base point (open or closed at 0)
        ivs = s.interval_on_line(self.base, self.direction)
        if len(ivs) != 1:
            return False
        iv = ivs[0]
        return iv.lo == 0 and iv.hi is None


def _require_nonempty(s: CellSet):
    if s.is_empty:
        raise ph.EmptyPolyhedronError("operation requires a nonempty set")


def inner_vector_space(s: CellSet) -> InnerSpaceResult:
    """Translation subspace of the closure (its lineality space)."""
    _require_nonempty(s)
    return InnerSpaceResult(tuple(ph.lineality_space(s.top)))


def essentially_inner_point(s: CellSet) -> Vec:
    """A point of the set with a relative neighborhood inside the set."""
    _require_nonempty(s)
    return ph.relint_point(s.top)


def outer_dimension(s: CellSet) -> int:
    """Dimension of the affine hull."""
    _require_nonempty(s)
    return s.top.affine_dim()


def is_closed(s: CellSet) -> bool:
    return s.is_empty or s.is_closed_set()


def is_affine(s: CellSet) -> bool:
    """Empty, or equal to its hull with the hull an affine subspace."""
    if s.is_empty:
        return True
    return s.top.inequalities == () and s.is_closed_set()


def _span_polyhedron(dim: int, basis: tuple[Vec, ...]) -> ph.HPolyhedron:
    if not basis:
        return ph.hpoly(dim, [(tuple(ONE if j == i else ZERO for j in range(dim)), ZERO)
                              for i in range(dim)], [])
    normals = nullspace(list(basis), dim)
    return ph.hpoly(dim, [(w, ZERO) for w in normals], [])


def _orthogonal_section(top: ph.HPolyhedron, basis: tuple[Vec, ...]) -> ph.HPolyhedron:
    rows = [(v, ZERO) for v in basis]
    return ph.intersect_hpoly(top, ph.hpoly(top.dim, rows, []))


def bounded_mod_subspace(s: CellSet):
    """Split off the translation subspace V if S = bounded + V.

    Succeeds iff the hull's recession cone equals its lineality space and
    the set is invariant under translation along V.
    """
    _require_nonempty(s)
    top = s.top
    rows = list(top.equalities) + list(top.inequalities)
    rec = ph.recession_cone(top)
    _verts, rays, _lines = rec.generators()
    for r in rays:
        if any(vdot(a, r) != 0 for a, _ in rows):
            return NotDecomposable(RECESSION_EXCEEDS_LINEALITY, witness_direction=r)
    basis = tuple(ph.lineality_space(top))
    excluded = s.excluded_cells()
    if basis and excluded:
        span = _span_polyhedron(s.dim, basis)
        for ci, c in enumerate(s.cells):
            if not s.included[ci]:
                continue
            shifted = ph.minkowski_sum(c.closure(), span)
            rel = ph.relint_constraints(shifted)
            for e in excluded:
                z = lp.strictly_feasible(list(e.constraints()) + rel, s.dim)
                if z is None:
                    continue
                p, v = _split_shift(z, c, basis, s.dim)
                return NotDecomposable(NOT_TRANSLATION_INVARIANT,
                                       witness_point=p, witness_shift=v)
    section = _orthogonal_section(top, basis)
    verts, srays, slines = section.generators()
    assert not srays and not slines, "section must be compact"
    radius_sq = max((vdot(v, v) for v in verts), default=ZERO)
    return BoundedDecomposition(basis, radius_sq)


def _split_shift(z: Vec, c: Cell, basis: tuple[Vec, ...], dim: int):
    """z = p + v with p in the cell and v in span(basis), exactly."""
    k = len(basis)
    total = dim + k
    cons: list[LinConstraint] = []
    for a, b in c.equalities:
        cons.append(LinConstraint(a + zero_vec(k), EQ, b))
    for a, b in c.stricts:
        cons.append(LinConstraint(a + zero_vec(k), LT, b))
    for i in range(dim):  # p_i + sum_j mu_j basis_j_i = z_i
        coeffs = tuple(ONE if j == i else ZERO for j in range(dim)) + \
            tuple(v[i] for v in basis)
        cons.append(LinConstraint(coeffs, EQ, z[i]))
    res = lp.strictly_feasible(cons, total)
    assert res is not None, "shift witness must decompose"
    p = res[:dim]
    v = vsub(z, p)
    return p, v


# -- dents ---------------------------------------------------------------------

frac_half = ONE / 2


def _face_tight_key(top: ph.HPolyhedron, x: Vec) -> frozenset[int]:
    return frozenset(i for i, (a, b) in enumerate(top.inequalities)
                     if vdot(a, x) == b)


def find_dent(s: CellSet) -> Optional[DentWitness]:
    """A certified dent, or None (certified by exhaustion of cell/face pairs)."""
    _require_nonempty(s)
    if s.is_closed_set():
        return None
    top = s.top
    faces = ph.face_lattice(top)
    face_cells = [cell_from_closure(f) for f in faces]
    excluded = [(i, c) for i, c in enumerate(s.cells) if not s.included[i]]
    exc_keys = [_face_tight_key(top, c.sample) for _, c in excluded]
    for ci, c in enumerate(s.cells):
        if not s.included[ci] or c.closure() == top:
            continue
        for fi, face in enumerate(faces):
            mid = vscale(frac_half, vadd(c.sample, face_cells[fi].sample))
            join_key = _face_tight_key(top, mid)
            hull = ph.convex_hull_union([c.closure(), face])
            if hull == top:
                continue  # the open mix lies in relint(top), all included
            rel = ph.relint_constraints(hull)
            for (ei, e), ekey in zip(excluded, exc_keys):
                if not ekey >= join_key:
                    continue
                a = lp.strictly_feasible(list(e.constraints()) + rel, s.dim)
                if a is None:
                    continue
                dec = perspective_decompose(a, c, face_cells[fi])
                assert dec is not None, "mix membership must decompose"
                lam, inner, tpt = dec
                return DentWitness(a, lam, inner, tpt, ci, face)
    return None


def dent_at(s: CellSet, a: Vec) -> Optional[DentWitness]:
    """Verify a specific point as a dent; returns a full witness or None."""
    _require_nonempty(s)
    if s.membership(a):
        return None
    if not s.top.contains(a):
        return None
    faces = ph.face_lattice(s.top)
    for ci, c in enumerate(s.cells):
        if not s.included[ci]:
            continue
        for face in faces:
            dec = perspective_decompose(a, c, cell_from_closure(face))
            if dec is not None:
                lam, inner, tpt = dec
                return DentWitness(a, lam, inner, tpt, ci, face)
    return None


# -- ray cuts ------------------------------------------------------------------


def _line_witness(s: CellSet, p0: Vec, w: Vec, tail: int, mode: str,
                  excluded_index=None) -> RayWitness:
    ivs = s.interval_on_line(p0, w)
    assert len(ivs) == 1, "membership on a line of a convex set is one interval"
    iv = ivs[0]
    assert iv.lo is not None and iv.hi is None, "expected a half-line"
    base = vadd(p0, vscale(iv.lo, w))
    return RayWitness(base, w, tail, mode, excluded_index)


def find_ray(s: CellSet) -> Optional[RayWitness]:
    """A certified ray cut, or None.

    Case A: an included cell whose closure recedes in a direction that is
    not a translation direction of the hull.  Case B: an excluded cell
    meeting the backward shadow cell - C of an included cell along its own
    recession cone C.  Both cases pin the base point exactly by the line's
    membership interval.
    """
    _require_nonempty(s)
    top_rows = list(s.top.equalities) + list(s.top.inequalities)
    rec_cache: list[ph.HPolyhedron | None] = []
    for ci, c in enumerate(s.cells):
        rec_cache.append(ph.recession_cone(c.closure()) if s.included[ci] else None)
    # case A
    for ci, c in enumerate(s.cells):
        if not s.included[ci]:
            continue
        _v, rays, lines = rec_cache[ci].generators()
        for g in list(rays) + [d for l in lines for d in (l, vscale(-ONE, l))]:
            if any(vdot(a, g) != 0 for a, _ in top_rows):
                return _line_witness(s, c.sample, g, ci, EXITS_HULL)
    # case B
    excluded = [(i, e) for i, e in enumerate(s.cells) if not s.included[i]]
    if not excluded:
        return None
    for ci, c in enumerate(s.cells):
        if not s.included[ci]:
            continue
        rec = rec_cache[ci]
        _v, rays, lines = rec.generators()
        if not rays and not lines:
            continue
        neg_rec = ph.hpoly(s.dim, [(a, b) for a, b in rec.equalities],
                           [(tuple(-x for x in a), b) for a, b in rec.inequalities])
        shadow = ph.minkowski_sum(c.closure(), neg_rec)
        rel = ph.relint_constraints(shadow)
        for ei, e in excluded:
            z = lp.strictly_feasible(list(e.constraints()) + rel, s.dim)
            if z is None:
                continue
            q = _shadow_direction(z, c, rec, s.dim)
            return _line_witness(s, z, q, ci, EXCLUDED_CELL, ei)
    return None


def _shadow_direction(z: Vec, c: Cell, rec: ph.HPolyhedron, dim: int) -> Vec:
    """q != 0 with z + q in the cell and q in its recession cone."""
    total = 2 * dim  # s | q
    cons: list[LinConstraint] = []
    for a, b in c.equalities:
        cons.append(LinConstraint(a + zero_vec(dim), EQ, b))
    for a, b in c.stricts:
        cons.append(LinConstraint(a + zero_vec(dim), LT, b))
    for a, b in rec.equalities:
        cons.append(LinConstraint(zero_vec(dim) + a, EQ, b))
    for a, b in rec.inequalities:
        cons.append(LinConstraint(zero_vec(dim) + a, LE, b))
    for i in range(dim):  # s_i - q_i = z_i
        coeffs = [ZERO] * total
        coeffs[i] = ONE
        coeffs[dim + i] = -ONE
        cons.append(LinConstraint(tuple(coeffs), EQ, z[i]))
    res = lp.strictly_feasible(cons, total)
    assert res is not None, "shadow point must decompose"
    q = res[dim:]
    assert not is_zero(q), "the excluded point cannot lie in the open cell"
    return q


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    tag: ConvexClass
    ray: Optional[RayWitness]
    decomposition: BoundedDecomposition | NotDecomposable | None
    dent: Optional[DentWitness]
    closed: bool
    affine: bool

    @property
    def bounded_mod_subspace_ok(self) -> bool:
        return isinstance(self.decomposition, BoundedDecomposition)


def classify(s: CellSet) -> Classification:
    """The unique class of the set, with all four predicate witnesses."""
    if s._classification is not None:
        return s._classification
    s._classification = _classify(s)
    return s._classification


def _classify(s: CellSet) -> Classification:
    if s.is_empty:
        return Classification(ConvexClass.AFFINE, None, None, None, True, True)
    ray = find_ray(s)
    dec = bounded_mod_subspace(s)
    dent = find_dent(s)
    closed = is_closed(s)
    affine = is_affine(s)
    if ray is not None:
        tag = ConvexClass.RAY
    elif isinstance(dec, NotDecomposable):
        tag = ConvexClass.UNBOUNDED_NO_RAY
    elif dent is not None:
        tag = ConvexClass.DENTED_BOUNDED
    elif not closed:
        tag = ConvexClass.OPEN_BOUNDED
    elif affine:
        tag = ConvexClass.AFFINE
    else:
        tag = ConvexClass.COMPACT_SUM
    return Classification(tag, ray, dec, dent, closed, affine)
