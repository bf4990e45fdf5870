import random
from fractions import Fraction

import pytest

from convexcells import lp
from convexcells.linalg import AffineMap, frac, vdot, vec
from convexcells.lp import EQ, LE, LT, LinConstraint, constraint
from convexcells.polyhedron import (EmptyPolyhedronError, HPolyhedron,
                                    convex_hull_union, empty_polyhedron,
                                    face_lattice, from_generators, full_space,
                                    hpoly, implicit_equalities, lineality_space,
                                    minimal_face_containing, minkowski_sum,
                                    project, proper_faces, recession_cone,
                                    relint_point, separate)

F = frac


def H(dim, eqs=(), ineqs=()):
    return hpoly(dim, [(vec(a), F(b)) for a, b in eqs],
                 [(vec(a), F(b)) for a, b in ineqs])


UNIT = H(1, ineqs=[([-1], 0), ([1], 1)])
HALF = H(1, ineqs=[([-1], 0)])
SQUARE = H(2, ineqs=[([-1, 0], 0), ([1, 0], 1), ([0, -1], 0), ([0, 1], 1)])
STRIPE = H(2, ineqs=[([0, -1], 0), ([0, 1], 1)])


class TestNormalForm:
    def test_implicit_equality_promotion(self):
        h = H(1, ineqs=[([1], 0), ([-1], 0)])
        assert h.inequalities == () and len(h.equalities) == 1

    def test_empty_detection(self):
        assert H(1, ineqs=[([1], 0), ([-1], -1)]).is_empty
        assert not H(1, eqs=[([1], 0)]).is_empty

    def test_redundant_rows_dropped(self):
        h = H(1, ineqs=[([1], 1), ([1], 2), ([2], 3), ([-1], 0)])
        assert h == UNIT

    def test_empty_is_first_class(self):
        e = empty_polyhedron(3)
        assert e.is_empty and e.dim == 3
        assert not e.contains(vec([0, 0, 0]))
        with pytest.raises(EmptyPolyhedronError):
            relint_point(e)
        with pytest.raises(EmptyPolyhedronError):
            recession_cone(e)
        with pytest.raises(EmptyPolyhedronError):
            face_lattice(e)


class TestImplicitEqualities:
    def test_forced_point(self):
        raw = HPolyhedron(1, (), ((vec([1]), F(0)), (vec([-1]), F(0))),
                          _normalized=True)
        assert implicit_equalities(raw) == {0, 1}

    def test_full_dimensional_square(self):
        assert implicit_equalities(SQUARE) == set()

    def test_three_rows_single_point(self):
        # {x+y<=1, x>=1, y>=0} is the single point (1,0): all rows tight
        raw = HPolyhedron(2, (), ((vec([1, 1]), F(1)), (vec([-1, 0]), F(-1)),
                                  (vec([0, -1]), F(0))), _normalized=True)
        assert implicit_equalities(raw) == {0, 1, 2}

    def test_requires_nonempty(self):
        with pytest.raises(EmptyPolyhedronError):
            implicit_equalities(empty_polyhedron(1))


class TestProject:
    def test_coordinate_projection_of_square(self):
        assert project(SQUARE, AffineMap([[1, 0]], [0])) == UNIT

    def test_halfplane_projects_onto_line(self):
        hp = H(2, ineqs=[([0, -1], 0)])
        assert project(hp, AffineMap([[1, 0]], [0])) == full_space(1)

    def test_cone_difference_map(self):
        # {x >= y >= 0} under (x,y) -> x-y equals {z >= 0}, by elimination
        cone = H(2, ineqs=[([-1, 1], 0), ([0, -1], 0)])
        assert project(cone, AffineMap([[1, -1]], [0])) == HALF

    def test_empty_projects_empty(self):
        assert project(empty_polyhedron(2), AffineMap([[1, 0]], [0])).is_empty


class TestDoubleDescription:
    def test_unit_interval(self):
        assert UNIT.generators() == ((vec([0]), vec([1])), (), ())

    def test_halfline(self):
        assert HALF.generators() == ((vec([0]),), (vec([1]),), ())

    def test_stripe(self):
        verts, rays, lines = STRIPE.generators()
        assert verts == (vec([0, 0]), vec([0, 1]))
        assert rays == ()
        assert lines == (vec([1, 0]),)

    def test_roundtrip_examples(self):
        for h in (UNIT, HALF, SQUARE, STRIPE, full_space(2),
                  H(3, eqs=[([1, -1, 0], 0)])):
            v, r, l = h.generators()
            assert from_generators(h.dim, v, r, l) == h


def _random_hpoly(rng, dim):
    rows = []
    for _ in range(rng.randint(1, dim + 3)):
        a = [rng.randint(-3, 3) for _ in range(dim)]
        if all(x == 0 for x in a):
            a[rng.randrange(dim)] = 1
        rows.append((vec(a), F(rng.randint(-2, 4))))
    eqs = []
    if rng.random() < 0.3:
        a = [rng.randint(-2, 2) for _ in range(dim)]
        if any(x != 0 for x in a):
            eqs.append((vec(a), F(rng.randint(-1, 1))))
    return hpoly(dim, eqs, rows)


def test_dd_roundtrip_random():
    """100 random polyhedra in dimension <= 4 reconstruct exactly."""
    rng = random.Random(7)
    done = 0
    while done < 100:
        h = _random_hpoly(rng, rng.randint(1, 4))
        if h.is_empty:
            continue
        v, r, l = h.generators()
        assert from_generators(h.dim, v, r, l) == h
        done += 1


def test_lineality_behavioral():
    """Vertices shifted by +-(basis vector) stay inside, per generator."""
    rng = random.Random(11)
    done = 0
    while done < 40:
        h = _random_hpoly(rng, rng.randint(1, 3))
        if h.is_empty:
            continue
        basis = lineality_space(h)
        verts, _, _ = h.generators()
        for v in basis:
            for g in verts:
                assert h.contains(tuple(a + b for a, b in zip(g, v)))
                assert h.contains(tuple(a - b for a, b in zip(g, v)))
        done += 1


def test_lineality_examples():
    assert lineality_space(STRIPE) == [vec([1, 0])]
    assert lineality_space(HALF) == []
    assert lineality_space(H(3, eqs=[([1, -1, 0], 0)])) == \
        [vec([1, 1, 0]), vec([0, 0, 1])]


def test_projection_exactness_random():
    """A point is in the projection iff the lifted system is feasible."""
    rng = random.Random(13)
    done = 0
    while done < 25:
        dim = rng.randint(2, 3)
        h = _random_hpoly(rng, dim)
        if h.is_empty:
            continue
        keep = rng.randrange(dim)
        f = AffineMap([[1 if j == keep else 0 for j in range(dim)]], [0])
        pr = project(h, f)
        for t in [F(k, 2) for k in range(-6, 7)]:
            lifted = h.constraints() + [
                LinConstraint(vec([1 if j == keep else 0 for j in range(dim)]),
                              EQ, t)]
            assert pr.contains((t,)) == lp.is_feasible(lifted, dim)
        done += 1


class TestRecession:
    def test_bounded_has_origin_cone(self):
        rc = recession_cone(UNIT)
        assert rc.contains(vec([0])) and not rc.contains(vec([1]))

    def test_halfline_its_own_cone(self):
        assert recession_cone(HALF) == HALF

    def test_stripe_cone_is_axis(self):
        rc = recession_cone(STRIPE)
        assert rc == H(2, eqs=[([0, 1], 0)])


class TestFaces:
    def test_interval_three_faces(self):
        assert len(face_lattice(UNIT)) == 3

    def test_square_nine_faces(self):
        assert len(face_lattice(SQUARE)) == 9

    def test_halfline_two_faces(self):
        assert len(face_lattice(HALF)) == 2

    def test_faces_complete_and_distinct(self):
        faces = face_lattice(SQUARE)
        assert len(set(faces)) == len(faces)
        assert SQUARE in faces
        for f in proper_faces(SQUARE):
            assert f.affine_dim() < 2

    def test_minimal_face(self):
        v = minimal_face_containing(SQUARE, vec([0, 0]))
        assert v.affine_dim() == 0
        e = minimal_face_containing(SQUARE, vec(["1/2", 0]))
        assert e.affine_dim() == 1
        assert minimal_face_containing(SQUARE, vec(["1/2", "1/2"])) == SQUARE


class TestRelint:
    def test_midpoint_of_interval(self):
        assert relint_point(UNIT) == (F(1, 2),)

    def test_diagonal_segment(self):
        d = H(2, eqs=[([1, -1], 0)], ineqs=[([-1, 0], 0), ([1, 0], 2)])
        assert relint_point(d) == vec([1, 1])

    def test_triangle_slack_max(self):
        t = H(2, ineqs=[([-1, 0], 0), ([0, -1], 0), ([1, 1], 1)])
        assert relint_point(t) == vec([F(1, 3), F(1, 3)])


class TestCombinations:
    def test_minkowski_identity(self):
        pt = H(1, eqs=[([1], 0)])
        assert minkowski_sum(UNIT, pt) == UNIT

    def test_point_plus_axis(self):
        origin = H(2, eqs=[([1, 0], 0), ([0, 1], 0)])
        axis = H(2, eqs=[([0, 1], 0)])
        assert minkowski_sum(origin, axis) == axis

    def test_segment_plus_ray(self):
        seg = H(2, eqs=[([1, 0], 0)], ineqs=[([0, -1], 0), ([0, 1], 1)])
        ray = from_generators(2, [vec([0, 0])], [vec([1, 0])])
        out = minkowski_sum(seg, ray)
        assert out == H(2, ineqs=[([-1, 0], 0), ([0, -1], 0), ([0, 1], 1)])

    def test_hull_of_intervals(self):
        a = H(1, ineqs=[([-1], -2), ([1], 3)])
        assert convex_hull_union([UNIT, a]) == H(1, ineqs=[([-1], 0), ([1], 3)])

    def test_hull_of_three_points_triangle(self):
        pts = [H(2, eqs=[([1, 0], x), ([0, 1], y)])
               for x, y in ((0, 1), (1, 0), (0, 0))]
        tri = convex_hull_union(pts)
        assert tri == H(2, ineqs=[([-1, 0], 0), ([0, -1], 0), ([1, 1], 1)])

    def test_hull_segment_and_vertical_ray(self):
        seg = H(2, eqs=[([0, 1], 0)], ineqs=[([-1, 0], 0), ([1, 0], 1)])
        ray = H(2, eqs=[([1, 0], 0)], ineqs=[([0, -1], 0)])
        out = convex_hull_union([seg, ray])
        assert out == H(2, ineqs=[([-1, 0], 0), ([0, -1], 0), ([1, 0], 1)])


def test_conv_closure_commute_random():
    """Hull of a family equals the hull rebuilt from raw generators."""
    rng = random.Random(17)
    for _ in range(25):
        dim = rng.randint(1, 3)
        parts = []
        for _ in range(rng.randint(1, 3)):
            verts = [vec([F(rng.randint(-3, 3), 2) for _ in range(dim)])
                     for _ in range(rng.randint(1, dim + 2))]
            parts.append(from_generators(dim, verts))
        hull = convex_hull_union(parts)
        all_verts = sorted({v for p in parts for v in p.generators()[0]})
        assert hull == from_generators(dim, all_verts)


class TestSeparate:
    def test_point_beyond_interval(self):
        c = separate(UNIT, (F(2),))
        assert c.normal == (F(-1),) and c.margin == 1 and c.verify(UNIT)

    def test_facet_normal(self):
        h = H(2, ineqs=[([0, -1], -1)])
        c = separate(h, vec([0, 0]))
        assert c.normal == vec([0, 1]) and c.margin == 1 and c.verify(h)

    def test_triangle_corner(self):
        tri = from_generators(2, [vec([0, 0]), vec([1, 0]), vec([0, 1])])
        c = separate(tri, vec([1, 1]))
        assert c.normal == vec([-1, -1]) and c.margin == 1 and c.verify(tri)

    def test_rejects_members(self):
        with pytest.raises(ValueError):
            separate(UNIT, (F(1, 2),))

    def test_lines_orthogonal_to_normal(self):
        c = separate(STRIPE, vec([0, 5]))
        _, _, lines = STRIPE.generators()
        assert all(vdot(l, c.normal) == 0 for l in lines)
        assert c.verify(STRIPE)

    def test_random_certificates_verify(self):
        rng = random.Random(23)
        done = 0
        while done < 25:
            h = _random_hpoly(rng, rng.randint(1, 3))
            if h.is_empty:
                continue
            x = vec([F(rng.randint(-8, 8), 1) for _ in range(h.dim)])
            if h.contains(x):
                continue
            assert separate(h, x).verify(h)
            done += 1

    def test_supporting_certificate_at_face_point(self):
        from convexcells.polyhedron import supporting_certificate
        c = supporting_certificate(SQUARE, vec([0, "1/2"]), vec([1, 0]))
        assert c.kind == "supporting" and c.margin == 0 and c.verify(SQUARE)
        # a non-supporting normal is rejected by verification
        from convexcells.polyhedron import SeparationCertificate, SUPPORTING
        bad = SeparationCertificate(vec([0, "1/2"]), vec([-1, 0]), F(0), SUPPORTING)
        assert not bad.verify(SQUARE)
