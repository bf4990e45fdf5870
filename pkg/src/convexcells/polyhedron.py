"""Closed polyhedra with exact rational arithmetic.

H-representation: equality rows plus non-strict inequality rows, kept in a
normal form (implicit equalities promoted, redundant rows removed, rows
primitive and sorted).  Generator representation (vertices / rays / lines)
is computed on demand by a double description pass over the homogenization
and cached; the two representations convert both ways.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .linalg import (AffineMap, ONE, Vec, ZERO, frac, is_zero, nullspace,
                     primitive, rank, rref, sign_normalized, unit_vec, vadd,
                     vdot, vscale, vsub, zero_vec, vec)
from .lp import EQ, LE, LT, LinConstraint

Row = tuple[Vec, Fraction]  # coeffs . x  (= | <=)  rhs


class EmptyPolyhedronError(ValueError):
    """Raised by operations that require a nonempty polyhedron."""


def _row_primitive(row: Row) -> Row:
    a, b = row
    ext = primitive(a + (b,))
    return ext[:-1], ext[-1]


def _row_sign_normalized(row: Row) -> Row:
    a, b = row
    ext = sign_normalized(a + (b,))
    return ext[:-1], ext[-1]


def _dedupe_sorted(rows: Iterable[Row]) -> tuple[Row, ...]:
    return tuple(sorted(set(rows)))


class HPolyhedron:
    """{x : E x = f, A x <= b} in normal form; empty is a first-class value."""

    __slots__ = ("dim", "equalities", "inequalities", "is_empty", "_gens",
                 "_faces", "_relint")

    def __init__(self, dim: int, equalities: Sequence[Row], inequalities: Sequence[Row],
                 _normalized: bool = False):
        self.dim = dim
        self._gens = None
        self._faces = None
        self._relint = None
        if _normalized:
            self.equalities = tuple(equalities)
            self.inequalities = tuple(inequalities)
            self.is_empty = False
            return
        eqs, ineqs, empty, witness = _normalize_rows(dim, equalities, inequalities)
        self.equalities = eqs
        self.inequalities = ineqs
        self.is_empty = empty
        self._relint = witness

    def constraints(self, strict: bool = False) -> list[LinConstraint]:
        rel = LT if strict else LE
        out = [LinConstraint(a, EQ, b) for a, b in self.equalities]
        out += [LinConstraint(a, rel, b) for a, b in self.inequalities]
        return out

    def contains(self, x: Vec) -> bool:
        if self.is_empty:
            return False
        if len(x) != self.dim:
            raise lp.DimensionMismatch("point of wrong dimension")
        return (all(vdot(a, x) == b for a, b in self.equalities)
                and all(vdot(a, x) <= b for a, b in self.inequalities))

    def affine_dim(self) -> int:
        if self.is_empty:
            raise EmptyPolyhedronError("empty polyhedron has no affine hull")
        return self.dim - len(self.equalities)

    def __eq__(self, other) -> bool:
        return (isinstance(other, HPolyhedron) and self.dim == other.dim
                and self.is_empty == other.is_empty
                and self.equalities == other.equalities
                and self.inequalities == other.inequalities)

    def __hash__(self):
        return hash((self.dim, self.is_empty, self.equalities, self.inequalities))

    def __repr__(self):
        if self.is_empty:
            return f"HPolyhedron(empty, dim={self.dim})"
        return (f"HPolyhedron(dim={self.dim}, eqs={len(self.equalities)}, "
                f"ineqs={len(self.inequalities)})")

    # -- generators --------------------------------------------------------

    def generators(self) -> tuple[tuple[Vec, ...], tuple[Vec, ...], tuple[Vec, ...]]:
        """(vertices, rays, lines); cached, canonicalized, exact."""
        if self._gens is None:
            self._gens = _enumerate_generators(self)
        return self._gens


def _empty(dim: int) -> HPolyhedron:
    h = HPolyhedron(dim, (), (), _normalized=True)
    h.equalities = ((zero_vec(dim), frac(-1)),)
    h.inequalities = ()
    h.is_empty = True
    return h


def empty_polyhedron(dim: int) -> HPolyhedron:
    return _empty(dim)


def _normalize_rows(dim: int, eqs_in: Sequence[Row], ineqs_in: Sequence[Row]):
    """Normal form: implicit equalities promoted, equalities in reduced form,
    inequalities reduced modulo the equalities, irredundant, sorted.

    Returns (equalities, inequalities, empty_flag, relint_witness).
    """
    def empty_result():
        return ((zero_vec(dim), frac(-1)),), (), True, None

    eqs = []
    ineqs = []
    for a, b in eqs_in:
        a = tuple(frac(x) for x in a)
        b = frac(b)
        if is_zero(a):
            if b != 0:
                return empty_result()
            continue
        eqs.append(_row_sign_normalized((a, b)))
    for a, b in ineqs_in:
        a = tuple(frac(x) for x in a)
        b = frac(b)
        if is_zero(a):
            if b < 0:
                return empty_result()
            continue
        ineqs.append(_row_primitive((a, b)))
    ineqs = sorted(set(ineqs))

    # fast path: a point with positive slack on every row means no implicit
    # equalities at all, and doubles as the relative-interior witness
    witness = None
    strict_cons = ([LinConstraint(a, EQ, b) for a, b in eqs]
                   + [LinConstraint(a, LT, b) for a, b in ineqs])
    res = lp.feasible_with_slack(strict_cons, dim)
    if res is not None:
        witness = res[0]
    else:
        cons = ([LinConstraint(a, EQ, b) for a, b in eqs]
                + [LinConstraint(a, LE, b) for a, b in ineqs])
        if not lp.is_feasible(cons, dim):
            return empty_result()
        # promote implicit equalities until the rest is strictly feasible
        while True:
            base = ([LinConstraint(a, EQ, b) for a, b in eqs]
                    + [LinConstraint(a, LE, b) for a, b in ineqs])
            keep = []
            for a, b in ineqs:
                st, _, val = lp.optimize(tuple(-x for x in a), base, dim)
                if st == lp.OPTIMAL and val == -b:  # min a.x == b: tight everywhere
                    eqs.append(_row_sign_normalized((a, b)))
                else:
                    keep.append((a, b))
            ineqs = keep
            strict_cons = ([LinConstraint(a, EQ, b) for a, b in eqs]
                           + [LinConstraint(a, LT, b) for a, b in ineqs])
            res = lp.feasible_with_slack(strict_cons, dim)
            if res is not None:
                witness = res[0]
                break

    # canonical equality system: RREF over (coeffs | rhs)
    if eqs:
        red, _ = rref([a + (b,) for a, b in eqs])
        eqs = [_row_sign_normalized((r[:-1], r[-1])) for r in red]

    # reduce inequality rows modulo equalities: eliminate pivot variables
    if eqs:
        red, pivots = rref([a + (b,) for a, b in eqs])
        reduced = []
        for a, b in ineqs:
            rr = _reduce_row_mod_eqs(a, b, red, pivots)
            if rr is not None:
                reduced.append(rr)
        ineqs = sorted(set(reduced))

    # drop redundant inequalities, deterministically
    ineqs = _drop_redundant(dim, eqs, ineqs)
    return tuple(sorted(set(eqs))), tuple(ineqs), False, witness


def _reduce_row_mod_eqs(a: Vec, b: Fraction, red, pivots) -> Row | None:
    """Rewrite a.x <= b eliminating the pivot variables of the equalities."""
    arow = list(a)
    rhs = b
    for prow, pc in zip(red, pivots):
        if arow[pc] != 0:
            f = arow[pc]
            for j in range(len(arow)):
                arow[j] -= f * prow[j]
            rhs -= f * prow[-1]
    a2 = tuple(arow)
    if is_zero(a2):
        return None  # implied (rhs >= 0 given consistency checked before)
    return _row_primitive((a2, rhs))


def _drop_redundant(dim: int, eqs: list[Row], ineqs: list[Row]) -> list[Row]:
    # same normal: only the smallest right-hand side can matter
    by_normal: dict[Vec, Fraction] = {}
    for a, b in ineqs:
        if a not in by_normal or b < by_normal[a]:
            by_normal[a] = b
    kept = sorted(by_normal.items())
    i = 0
    while i < len(kept):
        a, b = kept[i]
        others = kept[:i] + kept[i + 1:]
        cons = ([LinConstraint(e, EQ, f) for e, f in eqs]
                + [LinConstraint(c, LE, d) for c, d in others])
        st, _, val = lp.optimize(a, cons, dim)
        if st == lp.OPTIMAL and val <= b:
            kept = others
        else:
            i += 1
    return kept


def hpoly(dim: int, eqs: Iterable[Row] = (), ineqs: Iterable[Row] = ()) -> HPolyhedron:
    return HPolyhedron(dim, tuple(eqs), tuple(ineqs))


def from_constraints(dim: int, cons: Sequence[LinConstraint]) -> HPolyhedron:
    eqs = [(c.coeffs, c.rhs) for c in cons if c.rel == EQ]
    ineqs = [(c.coeffs, c.rhs) for c in cons if c.rel == LE]
    if any(c.rel == LT for c in cons):
        raise ValueError("strict rows cannot enter a closed polyhedron")
    return hpoly(dim, eqs, ineqs)


def intersect_hpoly(*hs: HPolyhedron) -> HPolyhedron:
    dim = hs[0].dim
    if any(h.dim != dim for h in hs):
        raise lp.DimensionMismatch("intersecting polyhedra of different dimensions")
    if any(h.is_empty for h in hs):
        return _empty(dim)
    eqs = [r for h in hs for r in h.equalities]
    ineqs = [r for h in hs for r in h.inequalities]
    return hpoly(dim, eqs, ineqs)


def full_space(dim: int) -> HPolyhedron:
    return hpoly(dim, (), ())


# -- operations -------------------------------------------------------------


def implicit_equalities(h: HPolyhedron) -> set[int]:
    """Indices of inequality rows of h that hold with equality on all of h.

    Meant for raw/constructed rows; a normalized HPolyhedron reports none.
    """
    if h.is_empty:
        raise EmptyPolyhedronError("implicit equalities of the empty polyhedron")
    base = h.constraints()
    out = set()
    for i, (a, b) in enumerate(h.inequalities):
        st, _, val = lp.optimize(tuple(-x for x in a), base, h.dim)
        if st == lp.OPTIMAL and val == -b:
            out.add(i)
    return out


def eliminate_variables(dim: int, eqs: Sequence[Row], ineqs: Sequence[Row],
                        kill: Sequence[int]) -> tuple[list[Row], list[Row]]:
    """Fourier-Motzkin / Gaussian elimination of the variables in `kill`.

    Rows live in R^dim; the output rows still live in R^dim with zero
    coefficients on eliminated variables.  Redundancy is pruned after each
    eliminated variable to keep intermediate systems small.
    """
    eqs = [(tuple(a), frac(b)) for a, b in eqs]
    ineqs = [(tuple(a), frac(b)) for a, b in ineqs]
    for var in sorted(kill):
        pivot_eq = next((r for r in eqs if r[0][var] != 0), None)
        if pivot_eq is not None:
            pa, pb = pivot_eq
            eqs = [_subst(r, pa, pb, var) for r in eqs if r is not pivot_eq]
            eqs = [r for r in eqs if r is not None]
            new_ineqs = []
            for r in ineqs:
                rr = _subst(r, pa, pb, var)
                if rr is not None:
                    new_ineqs.append(rr)
            ineqs = new_ineqs
            continue
        pos = [r for r in ineqs if r[0][var] > 0]
        neg = [r for r in ineqs if r[0][var] < 0]
        zero = [r for r in ineqs if r[0][var] == 0]
        combos = []
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[var], -an[var]
                a = vadd(vscale(cn, ap), vscale(cp, an))
                b = cn * bp + cp * bn
                if is_zero(a):
                    if b < 0:
                        return [(zero_vec(dim), frac(-1))], []
                    continue
                combos.append(_row_primitive((a, b)))
        ineqs = sorted(set(zero + combos))
        cons = [LinConstraint(a, LE, b) for a, b in ineqs] + \
               [LinConstraint(a, EQ, b) for a, b in eqs]
        if not lp.is_feasible(cons, dim):
            return [(zero_vec(dim), frac(-1))], []
        ineqs = _drop_redundant(dim, eqs, list(ineqs))
    return eqs, ineqs


def _subst(row: Row, pa: Vec, pb: Fraction, var: int) -> Row | None:
    a, b = row
    if a[var] == 0:
        return row
    f = a[var] / pa[var]
    na = vsub(a, vscale(f, pa))
    nb = b - f * pb
    if is_zero(na):
        return None if nb >= 0 else (zero_vec(len(a)), frac(-1))
    return _row_primitive((na, nb))


def project(h: HPolyhedron, f: AffineMap) -> HPolyhedron:
    """Exact image f(h) of the polyhedron under an affine map."""
    if f.dim_in != h.dim:
        raise lp.DimensionMismatch("map domain does not match polyhedron")
    m = f.dim_out
    if h.is_empty:
        return _empty(m)
    # variables (y, x) in R^{m+n}: y = Mx + w, x in h; eliminate x
    n = h.dim
    total = m + n
    eqs: list[Row] = []
    for i in range(m):
        a = unit_vec(i, total)
        a = tuple(a[j] if j < m else -f.matrix[i][j - m] for j in range(total))
        eqs.append((a, f.offset[i]))
    for a, b in h.equalities:
        eqs.append((zero_vec(m) + a, b))
    ineqs = [(zero_vec(m) + a, b) for a, b in h.inequalities]
    eqs2, ineqs2 = eliminate_variables(total, eqs, ineqs, range(m, total))
    return hpoly(m, [(a[:m], b) for a, b in eqs2], [(a[:m], b) for a, b in ineqs2])


# -- double description ------------------------------------------------------


def _cone_dd(dim: int, eq_rows: Sequence[Vec], ineq_rows: Sequence[Vec]):
    """Generators of {z : e.z = 0, a.z <= 0}: (lines, extreme rays).

    Incremental double description: lines hold the current lineality basis,
    rays generate the cone modulo the lines.  Constraints are inserted in
    lexicographic order; adjacency of rays is the algebraic rank test (the
    minimal face containing both rays has dimension len(lines) + 2).
    """
    lines: list[Vec] = [unit_vec(i, dim) for i in range(dim)]
    rays: list[Vec] = []
    processed: list[Vec] = []

    def adjacent(r1: Vec, r2: Vec) -> bool:
        if dim - len(lines) <= 2:
            return True
        tight = [row for row in processed
                 if vdot(row, r1) == 0 and vdot(row, r2) == 0]
        return rank(tight) == dim - len(lines) - 2

    def insert(row: Vec, is_eq: bool):
        nonlocal lines, rays
        vals = [vdot(row, l) for l in lines]
        j = next((k for k in range(len(lines)) if vals[k] != 0), None)
        if j is not None:
            l0, v0 = lines[j], vals[j]
            if v0 > 0:
                l0, v0 = tuple(-x for x in l0), -v0
            lines = [sign_normalized(vsub(l, vscale(vals[k] / v0, l0)))
                     for k, l in enumerate(lines) if k != j]
            new_rays = [primitive(vsub(r, vscale(vdot(row, r) / v0, l0)))
                        for r in rays]
            if not is_eq:
                new_rays.append(primitive(l0))
            rays = _dedupe_rays(new_rays)
            return
        neg, zero, pos = [], [], []
        for r in rays:
            c = vdot(row, r)
            (neg if c < 0 else zero if c == 0 else pos).append((r, c))
        keep = [r for r, _ in zero] if is_eq else [r for r, _ in neg + zero]
        for rp, cp in pos:
            for rn, cn in neg:
                if not adjacent(rp, rn):
                    continue
                comb = vadd(vscale(cp, rn), vscale(-cn, rp))
                if not is_zero(comb):
                    keep.append(primitive(comb))
        rays = _dedupe_rays(keep)

    for row in sorted(sign_normalized(r) for r in eq_rows):
        insert(row, True)
        processed.append(row)
        processed.append(tuple(-x for x in row))
    for row in sorted(primitive(r) for r in ineq_rows):
        insert(row, False)
        processed.append(row)
    return [sign_normalized(l) for l in lines], _dedupe_rays(rays)


def _dedupe_rays(rays: Iterable[Vec]) -> list[Vec]:
    seen = {}
    for r in rays:
        if is_zero(r):
            continue
        seen.setdefault(primitive(r), None)
    return sorted(seen)


def _enumerate_generators(h: HPolyhedron):
    if h.is_empty:
        return (), (), ()
    n = h.dim
    eq_rows = [a + (-b,) for a, b in h.equalities]
    ineq_rows = [a + (-b,) for a, b in h.inequalities]
    ineq_rows.append(zero_vec(n) + (frac(-1),))  # homogenizing t >= 0
    lines, rays = _cone_dd(n + 1, eq_rows, ineq_rows)
    verts, rec_rays, rec_lines = [], [], []
    for l in lines:
        assert l[n] == 0, "homogenization lines must have t = 0"
        rec_lines.append(sign_normalized(l[:n]))
    for r in rays:
        t = r[n]
        assert t >= 0
        if t > 0:
            verts.append(tuple(x / t for x in r[:n]))
        else:
            rec_rays.append(primitive(r[:n]))
    assert verts, "nonempty polyhedron must expose a vertex modulo lines"
    return tuple(sorted(verts)), tuple(sorted(rec_rays)), tuple(sorted(rec_lines))


def dd_convert(h: HPolyhedron):
    """Generator representation (vertices, rays, lines) of h."""
    return h.generators()


def from_generators(dim: int, vertices: Sequence[Vec], rays: Sequence[Vec] = (),
                    lines: Sequence[Vec] = ()) -> HPolyhedron:
    """Polyhedron conv(vertices) + cone(rays) + span(lines), via polarity."""
    if not vertices:
        return _empty(dim)
    ineq_rows = [vec(v) + (ONE,) for v in vertices]
    ineq_rows += [vec(r) + (ZERO,) for r in rays]
    eq_rows = [vec(l) + (ZERO,) for l in lines]
    dlines, drays = _cone_dd(dim + 1, eq_rows, ineq_rows)
    eqs: list[Row] = []
    ineqs: list[Row] = []
    for a in dlines:
        eqs.append((a[:dim], -a[dim]))
    for a in drays:
        ineqs.append((a[:dim], -a[dim]))
    poly = hpoly(dim, eqs, ineqs)
    assert not poly.is_empty
    return poly


# -- recession structure ------------------------------------------------------


def recession_cone(h: HPolyhedron) -> HPolyhedron:
    """{v : Av <= 0, Ev = 0}; contains 0."""
    if h.is_empty:
        raise EmptyPolyhedronError("recession cone of the empty polyhedron")
    return hpoly(h.dim,
                 [(a, ZERO) for a, _ in h.equalities],
                 [(a, ZERO) for a, _ in h.inequalities])


def lineality_space(h: HPolyhedron) -> list[Vec]:
    """Deterministic basis of {v : Av = 0, Ev = 0}."""
    if h.is_empty:
        raise EmptyPolyhedronError("lineality space of the empty polyhedron")
    rows = [a for a, _ in h.equalities] + [a for a, _ in h.inequalities]
    return nullspace(rows, h.dim)


def relint_constraints(h: HPolyhedron) -> list[LinConstraint]:
    """Constraint rows of the relative interior: equalities plus strict facets."""
    if h.is_empty:
        raise EmptyPolyhedronError("relative interior of the empty polyhedron")
    return ([LinConstraint(a, EQ, b) for a, b in h.equalities]
            + [LinConstraint(a, LT, b) for a, b in h.inequalities])


def relint_point(h: HPolyhedron) -> Vec:
    """A rational point satisfying every non-implicit inequality strictly."""
    if h.is_empty:
        raise EmptyPolyhedronError("relative interior of the empty polyhedron")
    if h._relint is None:
        res = lp.feasible_with_slack(h.constraints(strict=True), h.dim)
        assert res is not None, "normalized nonempty polyhedron has a relint point"
        h._relint = res[0]
    return h._relint


# -- combinations -------------------------------------------------------------


def minkowski_sum(h: HPolyhedron, k: HPolyhedron) -> HPolyhedron:
    """{x + y : x in h, y in k}, via generators."""
    if h.dim != k.dim:
        raise lp.DimensionMismatch("summands of different dimensions")
    if h.is_empty or k.is_empty:
        return _empty(h.dim)
    vh, rh, lh = h.generators()
    vk, rk, lk = k.generators()
    verts = sorted({vadd(a, b) for a in vh for b in vk})
    return from_generators(h.dim, verts, tuple(rh) + tuple(rk), tuple(lh) + tuple(lk))


def convex_hull_union(hs: Sequence[HPolyhedron]) -> HPolyhedron:
    """Smallest closed polyhedron containing every input."""
    if not hs:
        raise ValueError("hull of an empty family")
    dim = hs[0].dim
    if any(h.dim != dim for h in hs):
        raise lp.DimensionMismatch("hull inputs of different dimensions")
    verts, rays, lines = [], [], []
    for h in hs:
        if h.is_empty:
            continue
        v, r, l = h.generators()
        verts += v
        rays += r
        lines += l
    if not verts:
        return _empty(dim)
    return from_generators(dim, sorted(set(verts)), rays, lines)


def is_cone(h: HPolyhedron) -> bool:
    if h.is_empty:
        return False
    if not h.contains(zero_vec(h.dim)):
        return False
    return all(b == 0 for _, b in h.equalities) and all(b == 0 for _, b in h.inequalities)


# -- faces --------------------------------------------------------------------


def face_lattice(h: HPolyhedron) -> list[HPolyhedron]:
    """All nonempty faces of h including h itself, deduplicated, sorted by
    (dimension, constraint key).  Cached on the polyhedron."""
    if h.is_empty:
        raise EmptyPolyhedronError("faces of the empty polyhedron")
    if h._faces is not None:
        return h._faces
    found: dict[frozenset[int], HPolyhedron] = {}
    m = len(h.inequalities)

    def close(tight: frozenset[int]) -> tuple[frozenset[int], HPolyhedron] | None:
        eqs = list(h.equalities) + [h.inequalities[i] for i in sorted(tight)]
        ineqs = [h.inequalities[i] for i in range(m) if i not in tight]
        face = hpoly(h.dim, eqs, ineqs)
        if face.is_empty:
            return None
        # a row is tight on the whole face iff it is tight at a relint point
        x = relint_point(face)
        full = frozenset(i for i, (a, b) in enumerate(h.inequalities)
                         if vdot(a, x) == b)
        return full, face

    queue = [frozenset()]
    res = close(frozenset())
    assert res is not None
    found[res[0]] = res[1]
    queue = [res[0]]
    while queue:
        tight = queue.pop()
        for i in range(m):
            if i in tight:
                continue
            res = close(tight | {i})
            if res is None:
                continue
            key, face = res
            if key not in found:
                found[key] = face
                queue.append(key)
    faces = sorted(found.values(),
                   key=lambda f: (f.affine_dim(), f.equalities, f.inequalities))
    h._faces = faces
    return faces


def proper_faces(h: HPolyhedron) -> list[HPolyhedron]:
    return [f for f in face_lattice(h) if f != h]


def minimal_face_containing(h: HPolyhedron, x: Vec) -> HPolyhedron:
    """The unique face F of h with x in relint(F)."""
    if not h.contains(x):
        raise ValueError("point not in polyhedron")
    tight = [i for i, (a, b) in enumerate(h.inequalities) if vdot(a, x) == b]
    eqs = list(h.equalities) + [h.inequalities[i] for i in tight]
    ineqs = [h.inequalities[i] for i in range(len(h.inequalities)) if i not in tight]
    return hpoly(h.dim, eqs, ineqs)


# -- separation ---------------------------------------------------------------

SUPPORTING = "supporting"
STRICT = "strict"


class SeparationCertificate:
    """Normal v with <s - a, v> >= margin on all of h (margin > 0 iff strict).

    The normal is not scaled to unit length; the statement is scale-invariant.
    """

    __slots__ = ("point", "normal", "margin", "kind")

    def __init__(self, point: Vec, normal: Vec, margin: Fraction, kind: str):
        self.point = point
        self.normal = normal
        self.margin = margin
        self.kind = kind

    def verify(self, h: HPolyhedron) -> bool:
        verts, rays, lines = h.generators()
        lo = self.margin if self.kind == STRICT else ZERO
        if self.kind == STRICT and self.margin <= 0:
            return False
        return (all(vdot(vsub(g, self.point), self.normal) >= lo for g in verts)
                and all(vdot(r, self.normal) >= 0 for r in rays)
                and all(vdot(l, self.normal) == 0 for l in lines))

    def __repr__(self):
        return f"SeparationCertificate({self.kind}, v={self.normal}, margin={self.margin})"


def separate(h: HPolyhedron, a: Vec) -> SeparationCertificate:
    """Strictly separating normal for a point outside a nonempty closed h."""
    if h.is_empty:
        raise EmptyPolyhedronError("cannot separate from the empty polyhedron")
    if h.contains(a):
        raise ValueError("point lies in the polyhedron")
    verts, rays, lines = h.generators()
    n = h.dim
    # variables (v, eps): maximize eps
    dim = n + 1
    cons: list[LinConstraint] = []
    for g in verts:
        cons.append(LinConstraint(vsub(a, g) + (ONE,), LE, ZERO))   # eps <= <g-a, v>
    for r in rays:
        cons.append(LinConstraint(tuple(-x for x in r) + (ZERO,), LE, ZERO))
    for l in lines:
        cons.append(LinConstraint(l + (ZERO,), EQ, ZERO))
    for i in range(n):
        e = unit_vec(i, n)
        cons.append(LinConstraint(e + (ZERO,), LE, ONE))
        cons.append(LinConstraint(tuple(-x for x in e) + (ZERO,), LE, ONE))
    cons.append(LinConstraint(zero_vec(n) + (ONE,), LE, ONE))
    st, point, val = lp.optimize(zero_vec(n) + (ONE,), cons, dim)
    assert st == lp.OPTIMAL and val > 0, "closed polyhedron strictly separates"
    cert = SeparationCertificate(a, point[:n], val, STRICT)
    assert cert.verify(h)
    return cert


def supporting_certificate(h: HPolyhedron, a: Vec, normal: Vec) -> SeparationCertificate:
    cert = SeparationCertificate(a, normal, ZERO, SUPPORTING)
    assert cert.verify(h)
    return cert
