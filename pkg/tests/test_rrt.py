"""Planar rooted trees: validation, dimension, moves, enumeration, grafting."""

import itertools

import pytest

from twoassoc import rrt
from twoassoc.errors import ValidationError
from twoassoc.rrt import LEAF, corolla


def err_code(fn, *args):
    with pytest.raises(ValidationError) as exc:
        fn(*args)
    return exc.value.code


class TestValidate:
    def test_corolla3_valid(self):
        t = rrt.validate_stable_rrt("root", {"root": ["a", "b", "c"]})
        assert t == corolla(3)
        assert rrt.leaf_count(t) == 3

    def test_single_vertex(self):
        t = rrt.validate_stable_rrt("root", {})
        assert t == LEAF
        assert rrt.dimension(t) == 0

    def test_unary_root(self):
        # Root with one child which has two leaf children.
        code = err_code(rrt.validate_stable_rrt, "root", {"root": ["x"], "x": ["a", "b"]})
        assert code == "UnaryVertex"

    def test_root_is_child(self):
        assert err_code(rrt.validate_stable_rrt, "r", {"r": ["a", "r"]}) == "RootIsChild"

    def test_multi_parent(self):
        children = {"r": ["a", "b"], "a": ["c", "d"], "b": ["c", "e"]}
        assert err_code(rrt.validate_stable_rrt, "r", children) == "OrphanOrMultiParent"

    def test_orphan(self):
        children = {"r": ["a", "b"], "z": []}
        assert err_code(rrt.validate_stable_rrt, "r", children) == "OrphanOrMultiParent"

    def test_cycle(self):
        children = {"r": ["a", "b"], "x": ["y", "w"], "y": ["x", "z"]}
        assert err_code(rrt.validate_stable_rrt, "r", children) == "DirectedCycle"


class TestDimension:
    def test_corolla4(self):
        assert rrt.dimension(corolla(4)) == 2

    def test_single_vertex(self):
        assert rrt.dimension(LEAF) == 0

    def test_full_binary_4(self):
        t = ((LEAF, LEAF), (LEAF, LEAF))
        assert rrt.leaf_count(t) == 4
        assert rrt.dimension(t) == 0

    def test_reformulation_matches_everywhere(self):
        for r in range(1, 7):
            for t in rrt.enumerate_kr(r).payload.values():
                assert rrt.dimension(t) == rrt.dimension_by_arities(t)

    def test_bounds(self):
        for r in range(2, 7):
            for t in rrt.enumerate_kr(r).payload.values():
                assert 0 <= rrt.dimension(t) <= r - 2


class TestMoves:
    def test_corolla3_has_two(self):
        assert len(rrt.enumerate_moves(corolla(3))) == 2

    def test_binary_none(self):
        assert rrt.enumerate_moves(((LEAF, LEAF), (LEAF, LEAF))) == []

    def test_corolla4_count_by_brute_force(self):
        # Consecutive blocks of length 2 <= l < 4 in a 4-sequence.
        want = sum(1 for l in (2, 3) for _ in range(4 - l + 1))
        assert want == 5
        assert len(rrt.enumerate_moves(corolla(4))) == 5

    def test_results_stable_same_leaves_dim_drop(self):
        for r in range(2, 6):
            for t in rrt.enumerate_kr(r).payload.values():
                for _, t2 in rrt.enumerate_moves(t):
                    assert rrt.is_stable(t2)
                    assert rrt.leaf_count(t2) == rrt.leaf_count(t)
                    assert rrt.dimension(t2) == rrt.dimension(t) - 1

    def test_results_pairwise_distinct(self):
        for r in range(2, 6):
            for t in rrt.enumerate_kr(r).payload.values():
                keys = [rrt.serialize(t2) for _, t2 in rrt.enumerate_moves(t)]
                assert len(keys) == len(set(keys))


class TestEnumerate:
    def test_r2(self):
        assert len(rrt.enumerate_kr(2)) == 1

    def test_r3(self):
        P = rrt.enumerate_kr(3)
        assert len(P) == 3
        assert P.face_vector() == (2, 1)

    def test_r4_pentagon(self):
        P = rrt.enumerate_kr(4)
        assert len(P) == 11
        assert P.face_vector() == (5, 5, 1)

    def test_covers_drop_dimension_by_one(self):
        for r in range(2, 7):
            P = rrt.enumerate_kr(r)
            assert P.is_graded_by_covers()

    def test_interval_cardinality_is_product(self):
        for r in range(2, 6):
            P = rrt.enumerate_kr(r)
            for key, t in P.payload.items():
                want = 1
                for p in rrt.interior_paths(t):
                    want *= len(rrt.enumerate_kr(len(rrt.subtree(t, p))))
                assert len(P.downset(key)) + 1 == want


class TestGamma:
    def test_corolla_components_identity(self):
        for r in range(2, 6):
            for t in rrt.enumerate_kr(r).payload.values():
                comps = {p: corolla(len(rrt.subtree(t, p))) for p in rrt.interior_paths(t)}
                assert rrt.gamma(t, comps) == t

    def test_corolla_anchor_is_identity(self):
        for t in rrt.enumerate_kr(4).payload.values():
            assert rrt.gamma(corolla(4), {(): t}) == t

    def test_image_size_arities_2_3(self):
        t = ((LEAF, LEAF, LEAF), LEAF)  # interior arities (2, 3)
        comps = [rrt.interior_paths(t)[0], rrt.interior_paths(t)[1]]
        image = set()
        for a in rrt.enumerate_kr(2).payload.values():
            for b in rrt.enumerate_kr(3).payload.values():
                by_arity = {2: a, 3: b}
                assign = {p: by_arity[len(rrt.subtree(t, p))] for p in comps}
                image.add(rrt.serialize(rrt.gamma(t, assign)))
        assert len(image) == len(rrt.enumerate_kr(2)) * len(rrt.enumerate_kr(3)) == 3
        K4 = rrt.enumerate_kr(4)
        assert image == set(K4.downset(rrt.serialize(t))) | {rrt.serialize(t)}

    def test_arity_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            rrt.gamma(corolla(3), {(): corolla(4)})
        assert exc.value.code == "ArityMismatch"


class TestContractionHom:
    def test_identity(self):
        t = ((LEAF, LEAF), LEAF)
        hom = rrt.contraction_hom(t, t)
        assert hom == {p: p for p, _ in rrt.paths(t)}

    def test_binary3_to_corolla(self):
        fine = ((LEAF, LEAF), LEAF)
        hom = rrt.contraction_hom(fine, corolla(3))
        assert hom is not None
        # The added vertex contracts onto the root.
        assert hom[(0,)] == ()
        assert hom[()] == ()
        assert hom[(0, 0)] == (0,)
        assert hom[(0, 1)] == (1,)
        assert hom[(1,)] == (2,)

    def test_dimension_increase_has_none(self):
        assert rrt.contraction_hom(corolla(3), ((LEAF, LEAF), LEAF)) is None

    def test_leaf_count_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            rrt.contraction_hom(corolla(3), corolla(4))
        assert exc.value.code == "LeafCountMismatch"

    def test_exists_iff_below_up_to_r5(self):
        for r in range(2, 6):
            P = rrt.enumerate_kr(r)
            items = sorted(P.payload.items())
            for (ka, ta), (kb, tb) in itertools.product(items, repeat=2):
                assert (rrt.contraction_hom(ta, tb) is not None) == P.leq(ka, kb)


def test_serialize_roundtrip():
    for r in range(1, 6):
        for t in rrt.enumerate_kr(r).payload.values():
            assert rrt.deserialize(rrt.serialize(t)) == t
