import random
from fractions import Fraction

import pytest

from conftest import corpus, interval_set, mk
from convexcells import algebra as alg
from convexcells.cells import canonicalize, equal, piece, subset
from convexcells.classification import ConvexClass, classify
from convexcells.constructions import (GridSpec, PreconditionError,
                                       construct_compact_interval,
                                       construct_open_interval,
                                       construct_pointed_rectangle,
                                       construct_ray, define_closed_from_ray,
                                       define_from_ray, pointed_half_plane,
                                       polymorphism_check, representative,
                                       verify_pointed_stripe_construction)
from convexcells.linalg import AffineMap, frac, vec
from convexcells.lp import EQ, LE, LT, constraint

F = frac


class TestRepresentatives:
    def test_shapes(self):
        assert equal(representative(2), interval_set(0, 1))
        assert equal(representative(3), interval_set(0, 1, True, True))
        assert equal(representative(6), mk(1, [([-1], LE, 0)]))

    def test_classes_match_indices(self):
        for k in range(1, 7):
            assert int(classify(representative(k)).tag) == k

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            representative(7)


class TestPointedHalfPlane:
    def test_class_six(self):
        assert classify(pointed_half_plane()).tag == ConvexClass.RAY

    def test_projection_is_halfline(self):
        img = alg.affine_image(pointed_half_plane(), AffineMap([[1, 0]], [0]))
        assert equal(img, representative(6))

    def test_vertical_slice_is_open_ray(self):
        pre = alg.affine_preimage(pointed_half_plane(),
                                  AffineMap([[1], [0]], [0, 1]))
        assert equal(pre, mk(1, [([-1], LT, 0)]))


class TestConstructRay:
    def test_closed_ray_self(self):
        r = construct_ray(representative(6))
        assert r.verified and equal(r.target, representative(6))

    def test_strip_with_open_halfline(self):
        s = mk(2, [([0, -1], LT, 0), ([0, 1], LT, 1)],
                  [([0, 1], EQ, 0), ([-1, 0], LT, 0)])
        r = construct_ray(s)
        assert r.verified
        assert equal(r.target, mk(1, [([-1], LT, 0)]))

    def test_halfplane_with_origin(self):
        s = mk(2, [([0, -1], LT, 0)],
                  [([1, 0], EQ, 0), ([0, 1], EQ, 0)])
        r = construct_ray(s)
        assert r.verified and equal(r.target, representative(6))

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            construct_ray(representative(2))


class TestConstructOpenInterval:
    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_non_closed_representatives(self, k):
        r = construct_open_interval(representative(k))
        assert r.verified

    def test_half_open(self):
        r = construct_open_interval(interval_set(0, 1, hi_open=True))
        assert r.verified

    def test_closed_rejected(self):
        with pytest.raises(PreconditionError):
            construct_open_interval(representative(2))


class TestConstructCompactInterval:
    def test_self(self):
        assert construct_compact_interval(representative(2)).verified

    def test_square_slice(self):
        sq = mk(2, [([-1, 0], LE, 0), ([1, 0], LE, 1),
                    ([0, -1], LE, 0), ([0, 1], LE, 1)])
        assert construct_compact_interval(sq).verified

    def test_open_interval_closes_up(self):
        assert construct_compact_interval(representative(3)).verified

    def test_pointed_box(self):
        assert construct_compact_interval(representative(4)).verified

    def test_stripe_closed_class2(self):
        stripe = mk(2, [([0, -1], LE, 0), ([0, 1], LE, 1)])
        assert construct_compact_interval(stripe).verified

    def test_wrong_class(self):
        with pytest.raises(PreconditionError):
            construct_compact_interval(representative(6))
        with pytest.raises(PreconditionError):
            construct_compact_interval(representative(1))


class TestConstructPointedRectangle:
    def test_fixed_point(self):
        r = construct_pointed_rectangle(representative(4))
        assert r.verified

    def test_open_square_plus_boundary_point(self):
        s = mk(2, [([-1, 0], LT, 0), ([1, 0], LT, 1),
                   ([0, -1], LT, 0), ([0, 1], LT, 1)],
                  [([1, 0], EQ, "1/2"), ([0, 1], EQ, 0)])
        r = construct_pointed_rectangle(s)
        assert r.verified

    def test_prism_with_attached_line(self):
        # an open box crossed with a full axis, plus that axis itself: the
        # translation subspace is nontrivial and the ambient dimension is 3
        s = mk(3, [([-1, 0, 0], LT, 1), ([1, 0, 0], LT, 1),
                   ([0, -1, 0], LT, 0), ([0, 1, 0], LT, 1)],
                  [([1, 0, 0], EQ, 0), ([0, 1, 0], EQ, 0)])
        assert int(classify(s).tag) == 4
        r = construct_pointed_rectangle(s)
        assert r.verified

    def test_wrong_class(self):
        with pytest.raises(PreconditionError):
            construct_pointed_rectangle(representative(3))


class TestStripPointwise:
    def test_representative_agrees_everywhere(self):
        rep = verify_pointed_stripe_construction(
            representative(5), GridSpec(density=4, window=F(2), truncation=12))
        assert rep.all_agree
        assert rep.truncation_matches_exact
        assert rep.total == 17 * 17

    def test_skewed_instance_agrees(self):
        skewed = alg.affine_image(representative(5),
                                  AffineMap([[1, 1], [0, 2]], [1, 0]))
        assert int(classify(skewed).tag) == 5
        rep = verify_pointed_stripe_construction(
            skewed, GridSpec(density=2, window=F(2), truncation=8))
        assert rep.all_agree

    def test_pointed_slab_in_three_dimensions(self):
        slab = mk(3, [([0, 0, -1], LT, 0), ([0, 0, 1], LT, 1)],
                     [([1, 0, 0], EQ, 0), ([0, 1, 0], EQ, 0), ([0, 0, 1], EQ, 0)])
        assert int(classify(slab).tag) == 5
        rep = verify_pointed_stripe_construction(
            slab, GridSpec(density=2, window=F(2), truncation=8))
        assert rep.all_agree

    def test_wrong_class(self):
        with pytest.raises(PreconditionError):
            verify_pointed_stripe_construction(representative(2))


class TestDefineFromRay:
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
    def test_representatives(self, k):
        assert define_from_ray(representative(k)).verified

    def test_closed_variant(self):
        for k in (1, 2, 6):
            assert define_closed_from_ray(representative(k)).verified
        stripe = mk(2, [([0, -1], LE, 0), ([0, 1], LE, 1)])
        assert define_closed_from_ray(stripe).verified
        simplex3 = mk(3, [([-1, 0, 0], LE, 0), ([0, -1, 0], LE, 0),
                          ([0, 0, -1], LE, 0), ([1, 1, 1], LE, 1)])
        assert define_closed_from_ray(simplex3).verified

    def test_closed_variant_rejects_open(self):
        with pytest.raises(PreconditionError):
            define_closed_from_ray(representative(3))

    def test_empty_target(self):
        assert define_from_ray(mk(1, [([1], LT, 0), ([-1], LT, 0)])).verified

    def test_full_space_target(self):
        assert define_from_ray(mk(2, [])).verified

    def test_nested_separator_blocks(self):
        # the trace on the bottom face is an open segment, which itself has
        # excluded endpoint cells: the separator recursion goes two deep
        s = mk(3, [([-1, 0, 0], LT, 0), ([1, 0, 0], LT, 1),
                   ([0, -1, 0], LT, 0), ([0, 1, 0], LT, 1),
                   ([0, 0, -1], LT, 0), ([0, 0, 1], LT, 1)],
                  [([0, 1, 0], EQ, "1/2"), ([0, 0, 1], EQ, 0),
                   ([-1, 0, 0], LT, 0), ([1, 0, 0], LT, 1)])
        assert int(classify(s).tag) == 4
        assert define_from_ray(s).verified


class TestPolymorphismCheck:
    def test_interval_stretch_violated(self):
        r = polymorphism_check(representative(2), [2, -1])
        assert not r.preserved
        assert all(representative(2).membership(p) for p in r.witness)
        comb = tuple(sum(w * p[i] for w, p in zip(r.weights, r.witness))
                     for i in range(1))
        assert comb == r.combination
        assert not representative(2).membership(r.combination)

    def test_affine_line_preserved(self):
        diag = mk(2, [([1, -1], EQ, 0)])
        assert polymorphism_check(diag, [2, -1]).preserved
        assert polymorphism_check(diag, [F(7, 2), F(-3, 2), -1]).preserved

    def test_midpoint_always_preserved(self):
        for k in (2, 3, 4, 6):
            assert polymorphism_check(representative(k),
                                      [F(1, 2), F(1, 2)]).preserved

    def test_weight_sum_checked(self):
        with pytest.raises(PreconditionError):
            polymorphism_check(representative(2), [1, 1])

    def test_dichotomy_on_corpus(self):
        """Negative-coefficient combinations break every non-affine convex
        set; nonnegative ones never do."""
        rng = random.Random(37)
        sets = [s for s in corpus(99, 8, dims=(1, 2)) if not classify(s).affine]
        for s in sets[:5]:
            lam = F(rng.randint(3, 6), 2)           # second weight < 0
            res = polymorphism_check(s, [lam, 1 - lam])
            assert not res.preserved
            lam = F(rng.randint(0, 4), 4)           # both weights >= 0
            assert polymorphism_check(s, [lam, 1 - lam]).preserved


class TestConstructionChains:
    def test_forward_chain_to_lower_classes(self):
        # each representative defines the expected lower representative
        assert construct_open_interval(representative(4)).verified
        assert construct_compact_interval(representative(3)).verified
        assert construct_compact_interval(representative(4)).verified

    def test_roundtrip_open_interval(self):
        """(0,1) -> [0,1] by closing, and [0,1]-built sets slice back."""
        up = construct_compact_interval(representative(3))
        assert up.verified
        back = construct_open_interval(representative(3))
        assert back.verified
