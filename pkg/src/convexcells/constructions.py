"""Executable constructions between the six canonical sets.

Each construction compiles a finite pipeline of algebra operations from a
given set to the canonical representative of a class (or back, from the
half-line to any target), evaluates it exactly, and verifies the result by
semantic set equality.  A report with verified=False on a documented
precondition signals a library bug, not an input condition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import algebra as alg, cells as cs, classification as cl, lp, polyhedron as ph
from .algebra import OpNode, evaluate
from .cells import Cell, CellSet, canonicalize, cell_from_closure, piece
from .classification import ConvexClass, classify
from .linalg import (AffineMap, ONE, Vec, ZERO, frac, nullspace, rank,
                     unit_vec, vadd, vdot, vscale, vsub, zero_vec)
from .lp import EQ, LE, LT, LinConstraint, constraint


class PreconditionError(ValueError):
    """The input set does not satisfy the construction's precondition."""


@dataclass
class ConstructionReport:
    name: str
    pipeline: OpNode
    evaluated: CellSet
    target: CellSet
    verified: bool


CONSTRUCTION_MAX_HYPERPLANES = 64  # compiled pipelines, not raw user input


def _report(name: str, root: OpNode, target: CellSet,
            max_hyperplanes: int = CONSTRUCTION_MAX_HYPERPLANES) -> ConstructionReport:
    value = evaluate(root, max_hyperplanes)
    return ConstructionReport(name, root, value, target, cs.equal(value, target))


# -- canonical sets -------------------------------------------------------------


@lru_cache(maxsize=None)
def representative(k: int) -> CellSet:
    """The canonical member of class k (1..6)."""
    if k == 1:    # the origin
        return canonicalize(1, [piece(1, [constraint([1], EQ, 0)])])
    if k == 2:    # unit interval
        return canonicalize(1, [piece(1, [constraint([-1], LE, 0),
                                          constraint([1], LE, 1)])])
    if k == 3:    # open unit interval
        return canonicalize(1, [piece(1, [constraint([-1], LT, 0),
                                          constraint([1], LT, 1)])])
    if k == 4:    # open box (-1,1)x(0,1) with the origin attached
        return canonicalize(2, [
            piece(2, [constraint([-1, 0], LT, 1), constraint([1, 0], LT, 1),
                      constraint([0, -1], LT, 0), constraint([0, 1], LT, 1)]),
            piece(2, [constraint([1, 0], EQ, 0), constraint([0, 1], EQ, 0)]),
        ])
    if k == 5:    # open strip R x (0,1) with the origin attached
        return canonicalize(2, [
            piece(2, [constraint([0, -1], LT, 0), constraint([0, 1], LT, 1)]),
            piece(2, [constraint([1, 0], EQ, 0), constraint([0, 1], EQ, 0)]),
        ])
    if k == 6:    # closed half-line
        return canonicalize(1, [piece(1, [constraint([-1], LE, 0)])])
    raise ValueError("class index must be between 1 and 6")


@lru_cache(maxsize=None)
def pointed_half_plane() -> CellSet:
    """{(x, y) : x > 0} with the origin attached; class 6, provided built-in."""
    return canonicalize(2, [
        piece(2, [constraint([-1, 0], LT, 0)]),
        piece(2, [constraint([1, 0], EQ, 0), constraint([0, 1], EQ, 0)]),
    ])


# -- forward constructions -------------------------------------------------------


def construct_ray(s: CellSet) -> ConstructionReport:
    """Slice the set along a ray-cut line; lands on {x>0} or {x>=0}."""
    w = cl.find_ray(s)
    if w is None:
        raise PreconditionError("the set has no ray cut")
    f = AffineMap([[wi] for wi in w.direction], w.base)
    root = alg.preimage(alg.source(s, "input"), f, "slice along the ray line")
    if s.membership(w.base):
        target = representative(6)
    else:
        target = canonicalize(1, [piece(1, [constraint([-1], LT, 0)])])
    return _report("ray", root, target)


def _first_excluded_sample(s: CellSet) -> Vec:
    for c, inc in zip(s.cells, s.included):
        if not inc:
            return c.sample
    raise PreconditionError("the set is closed")


def construct_open_interval(s: CellSet) -> ConstructionReport:
    """Mix a missing closure point with an inner point; lands on (0,1)."""
    if s.is_empty or s.is_closed_set():
        raise PreconditionError("the set must not be closed")
    u = ph.relint_point(s.top)
    t = _first_excluded_sample(s)          # in the closure, not in the set
    d = vsub(u, t)
    f1 = AffineMap([[di] for di in d], t)                       # x -> t + x d
    f2 = AffineMap([[-di] for di in d], u)                      # x -> t + (1-x) d
    src = alg.source(s, "input")
    root = alg.intersect_nodes(
        alg.preimage(src, f1, "segment from the missing point"),
        alg.preimage(src, f2, "same segment, reversed"),
        label="open unit interval")
    return _report("open-interval", root, representative(3))


def _direction_outside_lineality(top: ph.HPolyhedron) -> Vec:
    aff_dirs = nullspace([a for a, _ in top.equalities], top.dim)
    rows = [a for a, _ in top.inequalities]
    for d in aff_dirs:
        if any(vdot(a, d) != 0 for a in rows):
            return d
    raise PreconditionError("the set is affine")


def construct_compact_interval(s: CellSet) -> ConstructionReport:
    """Lands on [0,1]; closed sets are sliced, open ones closed up."""
    tag = classify(s).tag
    if tag not in (ConvexClass.COMPACT_SUM, ConvexClass.OPEN_BOUNDED,
                   ConvexClass.DENTED_BOUNDED):
        raise PreconditionError("the set must be bounded modulo a subspace "
                                "and not affine")
    if not s.is_closed_set():
        inner = construct_open_interval(s)
        root = alg.closure_node(inner.pipeline, "close the open interval")
        return _report("compact-interval", root, representative(2))
    u = ph.relint_point(s.top)
    d = _direction_outside_lineality(s.top)
    ivs = s.interval_on_line(u, d)
    assert len(ivs) == 1
    iv = ivs[0]
    assert iv.lo is not None and iv.hi is not None, "slice must be compact"
    lo_pt = vadd(u, vscale(iv.lo, d))
    span = vscale(iv.hi - iv.lo, d)
    f = AffineMap([[di] for di in span], lo_pt)   # x -> lo_pt + x (hi-lo) d
    root = alg.preimage(alg.source(s, "input"), f, "slice through the interior")
    return _report("compact-interval", root, representative(2))


def _normalizing_map(s_pt: Vec, t_pt: Vec, b_pt: Vec, n: int) -> AffineMap:
    """Invertible g with g(s)=0, g(t)=e2, g(b)=e1."""
    v1 = vsub(b_pt, s_pt)
    v2 = vsub(t_pt, s_pt)
    basis = [v1, v2]
    for i in range(n):
        cand = unit_vec(i, n)
        if rank(basis + [cand]) > rank(basis):
            basis.append(cand)
        if len(basis) == n:
            break
    cols = list(zip(*basis))
    fwd = AffineMap([list(r) for r in cols], s_pt)   # x -> s + B x
    return fwd.inverse()


def _off_line_inner_point(s: CellSet, s_pt: Vec, t_pt: Vec) -> Vec:
    """An interior point affinely independent from the dent segment."""
    u = ph.relint_point(s.top)
    seg = vsub(t_pt, s_pt)
    if rank([seg, vsub(u, s_pt)]) == 2:
        return u
    top_cell = cell_from_closure(s.top)
    for w in nullspace([a for a, _ in s.top.equalities], s.dim):
        if rank([seg, w]) == 2:
            iv = top_cell.interval_on_line(u, w)
            assert iv is not None and iv.contains(ZERO)
            eps = ONE if iv.hi is None else iv.hi / 2  # open interval: hi > 0
            return vadd(u, vscale(eps, w))
    raise AssertionError("a dented set spans at least two dimensions")


def construct_pointed_rectangle(s: CellSet) -> ConstructionReport:
    """The staged normalization of a dented bounded set onto the pointed box."""
    cls = classify(s)
    if cls.tag != ConvexClass.DENTED_BOUNDED:
        raise PreconditionError("the set must be bounded modulo a subspace "
                                "with a dent")
    dent = cls.dent
    s_pt, t_pt = dent.inner, dent.closure_pt
    b_pt = _off_line_inner_point(s, s_pt, t_pt)
    n = s.dim
    g = _normalizing_map(s_pt, t_pt, b_pt, n)

    i01 = construct_compact_interval(s).pipeline
    o01 = construct_open_interval(s).pipeline
    src = alg.source(s, "input")
    s0 = alg.image(src, g, "normalized: dent segment on the second axis")

    def in_unit(row, label=""):
        # the listed combination of plane coordinates must land in [0,1]
        return alg.preimage(i01, AffineMap([row], [ZERO]), label)

    emb_rows = [[ONE, ZERO], [ZERO, ONE]] + [[ZERO, ZERO]] * (n - 2)
    emb = AffineMap(emb_rows, zero_vec(n))
    s1 = alg.intersect_nodes(
        alg.preimage(s0, emb, "restrict to the first two coordinates"),
        in_unit([ONE, ZERO], "first coordinate in [0,1]"),
        in_unit([ZERO, ONE], "second coordinate in [0,1]"),
        in_unit([ONE, ONE], "coordinate sum in [0,1]"),
        label="trimmed triangle")

    # cut height: the axis segment of the trimmed triangle reaches up to c
    v1 = evaluate(s1)
    ivs = v1.interval_on_line(zero_vec(2), (ZERO, ONE))
    assert len(ivs) == 1 and ivs[0].lo == 0 and ivs[0].hi is not None
    c = ivs[0].hi

    s2 = alg.dlimit_node(s1, (ZERO, ONE), "fill the axis up to the cut height")
    shear = AffineMap([[ONE, ZERO], [-c, ONE - c]], [ZERO, c])
    s3 = alg.intersect_nodes(
        alg.preimage(s2, shear, "shear the cut down to the origin"),
        in_unit([ZERO, ONE]),
        label="triangle with a clean axis")
    halve = AffineMap([[ONE / 2, ZERO], [ZERO, ONE / 2]], [ZERO, ZERO])
    s4 = alg.intersect_nodes(
        alg.preimage(s3, halve, "dilate by two"),
        in_unit([ONE, ZERO]),
        in_unit([ZERO, ONE]),
        label="unit square with a clean left edge")

    # variables (h, y, x): h selects the slice, x is the symmetric difference
    pick = AffineMap([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO]], [ZERO, ZERO])
    diff = AffineMap([[ONE, ZERO, ZERO], [ZERO, ONE, -ONE]], [ZERO, ZERO])
    trim_x = alg.preimage(o01, AffineMap([[ZERO, ZERO, ONE / 2]], [ONE / 2]),
                          "difference in (-1,1)")
    trim_h = alg.preimage(o01, AffineMap([[ONE / 2, ZERO, ZERO]], [ONE / 2]),
                          "slice height in (-1,1)")
    s5_body = alg.intersect_nodes(
        alg.preimage(s4, pick, "a point of the slice"),
        alg.preimage(s4, diff, "the shifted point of the slice"),
        trim_x, trim_h, label="symmetrized")
    s5 = alg.image(s5_body, AffineMap([[ZERO, ZERO, ONE], [ONE, ZERO, ZERO]],
                                      [ZERO, ZERO]),
                   "difference and slice height as the two axes")
    return _report("pointed-rectangle", s5, representative(4))


# -- pointwise verification of the strip construction ---------------------------


@dataclass(frozen=True)
class GridSpec:
    density: int = 4
    window: Fraction = frac(2)
    truncation: int = 64


@dataclass(frozen=True)
class PointwiseReport:
    name: str
    total: int
    agreements: int
    disagreements: tuple[tuple[Vec, bool, bool], ...]
    truncation_matches_exact: bool

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.total


def verify_pointed_stripe_construction(s: CellSet,
                                       grid: GridSpec = GridSpec()) -> PointwiseReport:
    """Exact pointwise check of the strip formula against the representative.

    The infinite tail (the scaled first coordinate staying in the slice for
    every n) is decided exactly by one interval computation per point; a
    finite truncation of the tail is evaluated alongside for comparison.
    """
    cls = classify(s)
    if cls.tag != ConvexClass.UNBOUNDED_NO_RAY:
        raise PreconditionError("the set must be unbounded without a ray cut")
    dec = cls.decomposition
    assert isinstance(dec, cl.NotDecomposable) and dec.witness_point is not None
    p, v = dec.witness_point, dec.witness_shift
    u = ph.relint_point(s.top)
    cols = [v, vsub(p, u)]
    f = AffineMap([list(r) for r in zip(*cols)], u)
    sprime = alg.affine_preimage(s, f)

    line = sprime.interval_on_line((ZERO, ONE), (ONE, ZERO))
    assert len(line) == 1
    a, b = line[0].lo, line[0].hi
    assert a is not None and b is not None, "the top slice must be bounded"

    target = representative(5)
    shift = a - b - ONE

    def tail_exact(x: Fraction, y: Fraction) -> bool:
        if x == 0:
            return sprime.membership((ZERO, ONE - y))
        ivs = sprime.interval_on_line((ZERO, ONE - y), (x, ZERO))
        return any(iv.contains(ONE) and iv.hi is None for iv in ivs)

    def tail_truncated(x: Fraction, y: Fraction) -> bool:
        return all(sprime.membership((n * x, ONE - y))
                   for n in range(1, grid.truncation + 1))

    pts = []
    step = frac(1) / grid.density
    w = grid.window
    t = -w
    while t <= w:
        pts.append(t)
        t += step
    total = 0
    agree = 0
    bad = []
    trunc_ok = True
    for x in pts:
        for y in pts:
            value = (sprime.membership((x, y))
                     and sprime.membership((x + shift, y))
                     and tail_exact(x, y))
            expected = target.membership((x, y))
            total += 1
            if value == expected:
                agree += 1
            else:
                bad.append(((x, y), value, expected))
            if tail_exact(x, y) != tail_truncated(x, y):
                # a finite truncation may only ever overshoot the exact tail
                if not tail_truncated(x, y):
                    trunc_ok = False
    return PointwiseReport("pointed-stripe-pointwise", total, agree,
                           tuple(bad), trunc_ok)


# -- reverse constructions (from the half-line) ----------------------------------


def _const_map(dim: int, value) -> AffineMap:
    return AffineMap([[ZERO] * dim], [frac(value)])


def _halfspace_nodes(top: ph.HPolyhedron, ray_node: OpNode) -> list[OpNode]:
    n = top.dim
    nodes = []
    for a, b in top.equalities:
        nodes.append(alg.preimage(ray_node, AffineMap([[-x for x in a]], [b]),
                                  "half-space of an equality"))
        nodes.append(alg.preimage(ray_node, AffineMap([list(a)], [-b]),
                                  "opposite half-space"))
    for a, b in top.inequalities:
        nodes.append(alg.preimage(ray_node, AffineMap([[-x for x in a]], [b]),
                                  "facet half-space"))
    return nodes


def _combine(nodes: list[OpNode], dim: int, ray_node: OpNode) -> OpNode:
    if not nodes:
        return alg.preimage(ray_node, _const_map(dim, 1), "whole space")
    if len(nodes) == 1:
        return nodes[0]
    return alg.intersect_nodes(*nodes)


def define_closed_from_ray(target: CellSet) -> ConstructionReport:
    """A closed set is the finite intersection of its facet half-spaces."""
    if not cl.is_closed(target):
        raise PreconditionError("the target must be closed")
    ray_node = alg.source(representative(6), "half-line")
    if target.is_empty:
        root = alg.preimage(ray_node, _const_map(target.dim, -1), "empty")
    else:
        root = _combine(_halfspace_nodes(target.top, ray_node), target.dim, ray_node)
    return _report("closed-from-ray", root, target)


def define_from_ray(target: CellSet,
                    max_hyperplanes: int = CONSTRUCTION_MAX_HYPERPLANES) -> ConstructionReport:
    """Define an arbitrary convex semilinear set from the half-line.

    Facet half-spaces pin the closure; every face that carries excluded
    cells gets a separator block gated by the pointed half-plane, whose
    equality branch recurses into the set's trace on that face.
    """
    ray_node = alg.source(representative(6), "half-line")
    php_node = alg.source(pointed_half_plane(), "pointed half-plane")
    strict_ray = alg.preimage(php_node, AffineMap([[ONE], [ZERO]], [ZERO, ONE]),
                              "open half-line")

    def compile_set(t: CellSet) -> OpNode:
        n = t.dim
        if t.is_empty:
            return alg.preimage(ray_node, _const_map(n, -1), "empty")
        nodes = _halfspace_nodes(t.top, ray_node)
        by_face: dict[frozenset, tuple[Vec, Fraction]] = {}
        for c, inc in zip(t.cells, t.included):
            if inc:
                continue
            tight = frozenset(i for i, (a, b) in enumerate(t.top.inequalities)
                              if vdot(a, c.sample) == b)
            assert tight, "an excluded cell lies on a proper face"
            if tight not in by_face:
                w = tuple(sum(col) for col in zip(
                    *[t.top.inequalities[i][0] for i in sorted(tight)]))
                beta = sum(t.top.inequalities[i][1] for i in sorted(tight))
                by_face[tight] = (w, beta)
        for tight in sorted(by_face, key=sorted):
            w, beta = by_face[tight]
            trace = alg.intersect(t, cs.cellset_from_polyhedron(
                ph.hpoly(n, [(w, beta)], [])), max_hyperplanes=max_hyperplanes)
            h_map = AffineMap([[-x for x in w]], [beta])     # x -> beta - w.x
            if trace.is_empty:
                nodes.append(alg.preimage(strict_ray, h_map, "open side only"))
                continue
            sub = compile_set(trace)
            # variables (b, y) with x = b + y; the gate forces y = 0 on the face
            pick_b = AffineMap([[ONE if j == i else ZERO for j in range(2 * n)]
                                for i in range(n)], zero_vec(n))
            gates = []
            h_row = [-x for x in w] + [-x for x in w]
            for i in range(n):
                y_row = [ZERO] * (2 * n)
                y_row[n + i] = ONE
                gates.append(alg.preimage(
                    php_node, AffineMap([h_row, y_row], [beta, ZERO]),
                    "face gate"))
            block = alg.intersect_nodes(alg.preimage(sub, pick_b, "trace part"),
                                        *gates, label="separator block")
            total = AffineMap([[ONE if j == i or j == n + i else ZERO
                                for j in range(2 * n)] for i in range(n)],
                              zero_vec(n))
            nodes.append(alg.image(block, total, "reassemble"))
        return _combine(nodes, n, ray_node)

    root = compile_set(target)
    return _report("from-ray", root, target, max_hyperplanes)


# -- polymorphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class PolymorphismResult:
    preserved: bool
    weights: tuple[Fraction, ...]
    witness: Optional[tuple[Vec, ...]] = None   # points of S
    combination: Optional[Vec] = None           # their weighted sum, outside S


def _scale_set(s: CellSet, lam: Fraction) -> CellSet:
    m = [[lam if i == j else ZERO for j in range(s.dim)] for i in range(s.dim)]
    return alg.affine_image(s, AffineMap(m, zero_vec(s.dim)),
                            CONSTRUCTION_MAX_HYPERPLANES)


def _minkowski_cellsets(a: CellSet, b: CellSet) -> CellSet:
    if a.is_empty or b.is_empty:
        return cs.empty_cellset(a.dim)
    pieces = []
    for ca in a.included_cells():
        for cb in b.included_cells():
            tot = ph.minkowski_sum(ca.closure(), cb.closure())
            pieces.append(tuple(ph.relint_constraints(tot)))
    return canonicalize(a.dim, pieces, CONSTRUCTION_MAX_HYPERPLANES,
                        assume_convex=True)


def _decompose_combination(z: Vec, s: CellSet, weights) -> tuple[Vec, ...]:
    """Points a_i of s with sum(weights_i * a_i) = z, exactly."""
    n = s.dim
    m = len(weights)
    inc = s.included_cells()

    def rec(idx: int, chosen: list[Cell]):
        if idx == m:
            total = n * m
            rows: list[LinConstraint] = []
            for j, c in enumerate(chosen):
                pad_l, pad_r = j * n, (m - j - 1) * n
                for con in c.constraints():
                    rows.append(LinConstraint(
                        zero_vec(pad_l) + con.coeffs + zero_vec(pad_r),
                        con.rel, con.rhs))
            for i in range(n):
                coeffs = [ZERO] * total
                for j, lam in enumerate(weights):
                    coeffs[j * n + i] = lam
                rows.append(LinConstraint(tuple(coeffs), EQ, z[i]))
            pt = lp.strictly_feasible(rows, total)
            if pt is None:
                return None
            return tuple(pt[j * n:(j + 1) * n] for j in range(m))
        for c in inc:
            res = rec(idx + 1, chosen + [c])
            if res is not None:
                return res
        return None

    out = rec(0, [])
    assert out is not None, "a point of the combination set must decompose"
    return out


def polymorphism_check(s: CellSet, weights: Sequence) -> PolymorphismResult:
    """Does the affine combination map with these weights preserve the set?

    Decided exactly: the weighted Minkowski combination of the set with
    itself is computed as a set and tested for containment.
    """
    lams = tuple(frac(w) for w in weights)
    if sum(lams) != 1:
        raise PreconditionError("weights must sum to one")
    if s.is_empty:
        return PolymorphismResult(True, lams)
    combo = _scale_set(s, lams[0])
    for lam in lams[1:]:
        combo = _minkowski_cellsets(combo, _scale_set(s, lam))
    z = cs.separating_point(combo, s)
    if z is None:
        return PolymorphismResult(True, lams)
    pts = _decompose_combination(z, s, lams)
    return PolymorphismResult(False, lams, pts, z)
