"""Shared builders and a seeded random corpus of convex semilinear sets."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from convexcells import algebra as alg
from convexcells.cells import CellSet, canonicalize, cellset_from_polyhedron, piece
from convexcells.linalg import AffineMap, frac, vec
from convexcells.lp import EQ, LE, LT, constraint
from convexcells import polyhedron as ph


def mk(dim, *piece_rows, assume_convex=False):
    """CellSet from rows given as (coeffs, rel, rhs) triples per piece."""
    pieces = [piece(dim, [constraint(c, r, b) for c, r, b in rows])
              for rows in piece_rows]
    return canonicalize(dim, pieces, assume_convex=assume_convex)


def interval_set(lo, hi, lo_open=False, hi_open=False) -> CellSet:
    rows = [([-1], LT if lo_open else LE, -frac(lo)),
            ([1], LT if hi_open else LE, frac(hi))]
    return mk(1, rows)


# -- random corpus ---------------------------------------------------------------


def _random_polytope(rng: random.Random, dim: int) -> ph.HPolyhedron:
    # simplex-ish in higher dimensions to keep face lattices small
    npts = rng.randint(dim + 1, dim + 3 if dim <= 2 else dim + 2)
    verts = []
    for _ in range(npts):
        verts.append(vec([frac(rng.randint(-4, 4), 2) for _ in range(dim)]))
    rays = []
    lines = []
    roll = rng.random()
    if roll < 0.25:
        rays.append(vec([rng.randint(-1, 1) for _ in range(dim)]))
        if all(x == 0 for x in rays[0]):
            rays = []
    elif roll < 0.4:
        l = vec([rng.randint(-1, 1) for _ in range(dim)])
        if any(x != 0 for x in l):
            lines.append(l)
    return ph.from_generators(dim, verts, rays, lines)


def _star_at_face(rng: random.Random, p: ph.HPolyhedron) -> CellSet:
    """Union of the relative interiors of all faces containing a chosen face.

    Convex for any polyhedron: the tight set of a midpoint of two points is
    contained in the intersection of their tight sets.
    """
    faces = ph.face_lattice(p)
    g = faces[rng.randrange(len(faces))]
    g_tight = _tight(p, g)
    pieces = []
    for f in faces:
        if g_tight >= _tight(p, f):
            pieces.append(tuple(ph.relint_constraints(f)))
    return canonicalize(p.dim, pieces, assume_convex=True)


def _tight(p: ph.HPolyhedron, face: ph.HPolyhedron) -> frozenset[int]:
    from convexcells.linalg import vdot
    x = ph.relint_point(face)
    return frozenset(i for i, (a, b) in enumerate(p.inequalities)
                     if vdot(a, x) == b)


def random_cellset(rng: random.Random, dim: int) -> CellSet:
    """A random convex semilinear set, varied across the six classes."""
    p = _random_polytope(rng, dim)
    roll = rng.random()
    if roll < 0.25:
        base = cellset_from_polyhedron(p)
    elif roll < 0.55:
        base = canonicalize(dim, [tuple(ph.relint_constraints(p))],
                            assume_convex=True)
    else:
        base = _star_at_face(rng, p)
    if rng.random() < (0.3 if dim <= 2 else 0.1):
        # one extra affine step keeps the corpus varied
        m = [[frac(rng.randint(-1, 2)) if i == j else frac(rng.randint(-1, 1))
              for j in range(dim)] for i in range(dim)]
        off = [frac(rng.randint(-2, 2), 2) for _ in range(dim)]
        try:
            return alg.affine_image(base, AffineMap(m, off))
        except Exception:
            return base
    return base


def corpus(seed: int, count: int, dims=(1, 2, 3)) -> list[CellSet]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_cellset(rng, rng.choice(dims))
        if not s.is_empty:
            out.append(s)
    return out


_MASTER: dict[int, list] = {}


def master_corpus(count: int, dims=(1, 2, 3)) -> list[CellSet]:
    """A shared seeded corpus; criteria slice deterministic prefixes."""
    have = _MASTER.setdefault(0, [])
    rng = _MASTER.setdefault(1, random.Random(20260811))
    picks = [s for s in have if s.dim in dims]
    while len(picks) < count:
        s = random_cellset(rng, rng.choice((1, 2, 2, 3)))
        if s.is_empty:
            continue
        have.append(s)
        if s.dim in dims:
            picks.append(s)
    return picks[:count]


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(20240811, 20)
