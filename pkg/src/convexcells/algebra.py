"""Closure operations of the definability algebra on convex semilinear sets.

Affine images, affine preimages, finite intersections, topological closure,
and the one-direction limit (the decreasing intersection of the set shifted
by ever-smaller steps along a direction).  All five preserve convexity and
never raise the class of a set; pipelines of these operations carry a
monotonicity report that checks exactly that.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import cells as cs, classification as cl, polyhedron as ph
from .cells import Cell, CellSet, Piece, canonicalize
from .classification import classify
from .linalg import AffineMap, Vec, is_zero, vdot
from .lp import DimensionMismatch, LinConstraint


def _image_piece(c: Cell, f: AffineMap) -> Piece | None:
    """f(cell) as a constraint conjunction: relint of the projected closure."""
    img = ph.project(c.closure(), f)
    if img.is_empty:
        return None
    return tuple(ph.relint_constraints(img))


def affine_image(s: CellSet, f: AffineMap,
                 max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    """{f(x) : x in S}; affine images of open cells stay open cells."""
    if f.dim_in != s.dim:
        raise DimensionMismatch("map domain does not match the set")
    if s.is_empty:
        return cs.empty_cellset(f.dim_out)
    pieces = []
    for c in s.included_cells():
        p = _image_piece(c, f)
        if p is not None:
            pieces.append(p)
    return canonicalize(f.dim_out, pieces, max_hyperplanes, assume_convex=True)


def affine_preimage(s: CellSet, f: AffineMap,
                    max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    """{x : f(x) in S} by substituting the map into every cell constraint."""
    if f.dim_out != s.dim:
        raise DimensionMismatch("map codomain does not match the set")
    n = f.dim_in
    if s.is_empty:
        return cs.empty_cellset(n)
    cols = tuple(tuple(f.matrix[i][j] for i in range(f.dim_out)) for j in range(n))
    pieces = []
    for c in s.included_cells():
        rows = []
        for con in c.constraints():
            coeffs = tuple(vdot(con.coeffs, col) for col in cols)
            rhs = con.rhs - vdot(con.coeffs, f.offset)
            rows.append(LinConstraint(coeffs, con.rel, rhs))
        pieces.append(tuple(rows))
    return canonicalize(n, pieces, max_hyperplanes, assume_convex=True)


def intersect(*sets: CellSet,
              max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    """Exact intersection of finitely many sets of equal dimension.

    Folded pairwise so that every intermediate result is canonical; this
    keeps the working hyperplane arrangement small for long intersections.
    """
    if len(sets) < 1:
        raise ValueError("intersection of an empty family")
    dim = sets[0].dim
    if any(t.dim != dim for t in sets):
        raise DimensionMismatch("intersecting sets of different dimensions")
    if any(t.is_empty for t in sets):
        return cs.empty_cellset(dim)
    acc = sets[0]
    for t in sets[1:]:
        if acc.is_closed_set() and t.is_closed_set():
            # intersection of closed sets is their polyhedral intersection
            acc = cs.cellset_from_polyhedron(ph.intersect_hpoly(acc.top, t.top))
        else:
            pieces = [tuple(a.constraints()) + tuple(b.constraints())
                      for a in acc.included_cells() for b in t.included_cells()]
            acc = canonicalize(dim, pieces, max_hyperplanes, assume_convex=True)
        if acc.is_empty:
            return acc
    return acc


def _creeps_into(cell: Cell, x: Vec, d: Vec) -> bool:
    """Does x - delta*d lie in the cell for all small delta > 0?

    First-order sign analysis per constraint; exact because the cell rows
    are sign-uniform on the region the sample represents.
    """
    for a, b in cell.equalities:
        if vdot(a, x) != b or vdot(a, d) != 0:
            return False
    for a, b in cell.stricts:
        v = vdot(a, x)
        if v > b:
            return False
        if v == b and vdot(a, d) <= 0:
            return False
    return True


def directional_limit(s: CellSet, d: Vec,
                      max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    """S plus the points whose small backward step along d stays in S.

    Equals the decreasing intersection over n of S + [0, 1/n] d: a cell of
    the partition joins the result iff the point x - delta*d for
    infinitesimal delta > 0 lands in an included cell.
    """
    if is_zero(d):
        raise ValueError("direction must be nonzero")
    if len(d) != s.dim:
        raise DimensionMismatch("direction of wrong dimension")
    if s.is_empty:
        return s
    included = s.included_cells()
    pieces: list[Piece] = [tuple(c.constraints()) for c in included]
    for e in s.excluded_cells():
        if any(_creeps_into(c, e.sample, d) for c in included):
            pieces.append(tuple(e.constraints()))
    return canonicalize(s.dim, pieces, max_hyperplanes, assume_convex=True)


# -- pipelines -----------------------------------------------------------------

SOURCE = "source"
IMAGE = "image"
PREIMAGE = "preimage"
INTERSECT = "intersect"
CLOSURE = "closure"
DLIMIT = "dlimit"


@dataclass
class OpNode:
    kind: str
    children: tuple["OpNode", ...] = ()
    source: Optional[CellSet] = None
    map: Optional[AffineMap] = None
    direction: Optional[Vec] = None
    label: str = ""
    _value: Optional[CellSet] = None

    def __post_init__(self):
        arity = {SOURCE: 0, IMAGE: 1, PREIMAGE: 1, CLOSURE: 1, DLIMIT: 1}
        if self.kind in arity and len(self.children) != arity[self.kind]:
            raise ValueError(f"{self.kind} node with {len(self.children)} children")
        if self.kind == INTERSECT and len(self.children) < 2:
            raise ValueError("intersect nodes need at least two children")

    @property
    def dim(self) -> int:
        if self.kind == SOURCE:
            return self.source.dim
        if self.kind == IMAGE:
            return self.map.dim_out
        if self.kind == PREIMAGE:
            return self.map.dim_in
        return self.children[0].dim


def source(s: CellSet, label: str = "") -> OpNode:
    return OpNode(SOURCE, source=s, label=label)


def image(node: OpNode, f: AffineMap, label: str = "") -> OpNode:
    if f.dim_in != node.dim:
        raise DimensionMismatch("image map does not fit the child dimension")
    return OpNode(IMAGE, (node,), map=f, label=label)


def preimage(node: OpNode, f: AffineMap, label: str = "") -> OpNode:
    if f.dim_out != node.dim:
        raise DimensionMismatch("preimage map does not fit the child dimension")
    return OpNode(PREIMAGE, (node,), map=f, label=label)


def intersect_nodes(*nodes: OpNode, label: str = "") -> OpNode:
    dims = {n.dim for n in nodes}
    if len(dims) != 1:
        raise DimensionMismatch("intersect children disagree on dimension")
    return OpNode(INTERSECT, tuple(nodes), label=label)


def closure_node(node: OpNode, label: str = "") -> OpNode:
    return OpNode(CLOSURE, (node,), label=label)


def dlimit_node(node: OpNode, d: Vec, label: str = "") -> OpNode:
    if len(d) != node.dim:
        raise DimensionMismatch("limit direction of wrong dimension")
    return OpNode(DLIMIT, (node,), direction=d, label=label)


def evaluate(node: OpNode,
             max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    """Bottom-up, memoized, deterministic evaluation of a pipeline node."""
    if node._value is not None:
        return node._value
    if node.kind == SOURCE:
        val = node.source
    elif node.kind == IMAGE:
        val = affine_image(evaluate(node.children[0], max_hyperplanes), node.map,
                           max_hyperplanes)
    elif node.kind == PREIMAGE:
        val = affine_preimage(evaluate(node.children[0], max_hyperplanes), node.map,
                              max_hyperplanes)
    elif node.kind == INTERSECT:
        val = intersect(*[evaluate(ch, max_hyperplanes) for ch in node.children],
                        max_hyperplanes=max_hyperplanes)
    elif node.kind == CLOSURE:
        val = cs.closure(evaluate(node.children[0], max_hyperplanes))
    elif node.kind == DLIMIT:
        val = directional_limit(evaluate(node.children[0], max_hyperplanes),
                                node.direction, max_hyperplanes)
    else:
        raise ValueError(f"unknown node kind {node.kind!r}")
    node._value = val
    return val


@dataclass(frozen=True)
class NodeReport:
    kind: str
    label: str
    dim: int
    tag: cl.ConvexClass
    source_max: cl.ConvexClass
    flagged: bool


@dataclass(frozen=True)
class MonotonicityReport:
    nodes: tuple[NodeReport, ...]

    @property
    def flagged(self) -> bool:
        return any(n.flagged for n in self.nodes)


def check_monotonicity(root: OpNode,
                       max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> MonotonicityReport:
    """Classify every node; flag any node whose class exceeds the maximum
    class of the source leaves below it (that would be a library bug)."""
    reports: list[NodeReport] = []

    def walk(node: OpNode) -> cl.ConvexClass:
        if node.kind == SOURCE:
            src_max = classify(node.source).tag
            reports.append(NodeReport(node.kind, node.label, node.dim,
                                      src_max, src_max, False))
            return src_max
        child_max = max(walk(ch) for ch in node.children)
        tag = classify(evaluate(node, max_hyperplanes)).tag
        reports.append(NodeReport(node.kind, node.label, node.dim, tag,
                                  child_max, tag > child_max))
        return child_max

    walk(root)
    return MonotonicityReport(tuple(reports))
