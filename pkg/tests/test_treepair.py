"""Tree-pairs: validation, coherence, dimension, moves, enumeration."""

import pytest
from conftest import N11410, WORKED_BUBBLE, WORKED_SEAM

from twoassoc import rrt, treepair
from twoassoc.errors import ValidationError
from twoassoc.rrt import LEAF, corolla
from twoassoc.treepair import TreePair, top_pair


class TestValidate:
    def test_worked_example_valid(self):
        p = TreePair(N11410, WORKED_BUBBLE)
        assert p.seam == WORKED_SEAM
        assert p.dimension() == 5

    def test_minimal_pair(self):
        p = TreePair((1,), ())
        assert p.dimension() == 0
        assert p.seam == LEAF

    def test_unstable_one_seam_disk(self):
        with pytest.raises(ValidationError) as exc:
            TreePair((1,), (((),),))
        assert exc.value.code == "UnstableC2"

    def test_unstable_multi_disk_all_bare(self):
        with pytest.raises(ValidationError) as exc:
            TreePair((0, 1), ((), ()), seam=(LEAF, LEAF))
        assert exc.value.code == "UnstableC2"

    def test_mark_count_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            TreePair((3, 0, 0), top_pair((2, 0, 0)).bubble)
        assert exc.value.code == "MarkCountMismatch"

    def test_tagged_kind_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            treepair.bubble_from_tagged({"kind": "C2", "children": [{"kind": "MARK", "children": []}]})
        assert exc.value.code == "KindEdgeMismatch"

    def test_supplied_coherence_checked(self):
        p = top_pair((2, 0, 0))
        good = {",".join(map(str, k)): list(v) for k, v in p.coherence.items()}
        assert treepair.validate_tree_pair({"n": p.n, "bubble": p.bubble, "coherence": p.coherence}).key == p.key
        bad = dict(p.coherence)
        bad[(0,)] = (1,)
        with pytest.raises(ValidationError) as exc:
            treepair.validate_tree_pair({"n": p.n, "bubble": p.bubble, "coherence": bad})
        assert exc.value.code == "CoherenceNotContracting"
        assert good  # silences lint on unused canonical form


class TestDeriveCoherence:
    def test_top_of_w200_gives_corolla(self):
        seam, _, _ = treepair.derive_coherence(top_pair((2, 0, 0)).bubble, (2, 0, 0))
        assert seam == corolla(3)

    def test_single_disk_chain_gives_point(self):
        seam, _, marks = treepair.derive_coherence((((), (), ()),), (3,))
        assert seam == LEAF
        assert sorted(marks.values()) == [(1, 1), (1, 2), (1, 3)]

    def test_worked_example_quotient(self):
        got = treepair.derive_coherence(WORKED_BUBBLE, N11410)
        assert got is not None
        seam, coherence, marks = got
        assert seam == WORKED_SEAM
        # Mark columns and stacking order follow the planar order.
        by_column = {}
        for path, (i, j) in marks.items():
            by_column.setdefault(i, []).append((j, path))
        assert sorted(len(v) for v in by_column.values()) == [1, 1, 1, 4]

    def test_underdetermined_returns_none(self):
        # Collapsing a block of bare columns leaves no disk above the new
        # seam, so the refinement below it is invisible in the bubble.
        bare_bubble = (((),), ())
        assert treepair.derive_coherence(bare_bubble, (1, 0, 0, 0)) is None
        # Same bubble, several valid seam trees: identity must store both.
        others = {
            q.seam
            for q in treepair.enumerate_wn((1, 0, 0, 0)).payload.values()
            if q.bubble == bare_bubble
        }
        assert len(others) > 1
        for seam in others:
            assert treepair.TreePair((1, 0, 0, 0), bare_bubble, seam=seam).seam == seam


class TestDimension:
    def test_top_faces(self):
        assert top_pair((2, 0, 0)).dimension() == 2
        assert top_pair((1,)).dimension() == 0

    def test_pentagon_vertices(self):
        W = treepair.enumerate_wn((2, 0, 0))
        verts = [p for p in W.payload.values() if p.dimension() == 0]
        assert len(verts) == 5
        assert all(not treepair.enumerate_2moves(p) for p in verts)

    def test_reformulation_everywhere(self):
        for n in [(2, 0, 0), (1, 1, 0), (2, 1), (3, 0)]:
            for p in treepair.enumerate_wn(n).payload.values():
                assert p.dimension() == p.dimension_by_parts()

    def test_bounds(self):
        for n in [(2, 0, 0), (2, 1)]:
            top = sum(n) + len(n) - 3
            for p in treepair.enumerate_wn(n).payload.values():
                assert 0 <= p.dimension() <= top


class TestMoves:
    def test_w200_top_has_five_faces(self):
        faces = treepair.codim1_faces(top_pair((2, 0, 0)))
        assert len(faces) == 5

    def test_move_types_from_w200_top(self):
        moves = treepair.enumerate_2moves(top_pair((2, 0, 0)))
        kinds = sorted(mv.kind for mv, _ in moves)
        assert kinds == [1, 2, 2, 2, 3]

    def test_zero_dimensional_has_none(self):
        for p in treepair.enumerate_wn((1, 1, 0)).payload.values():
            if p.dimension() == 0:
                assert treepair.enumerate_2moves(p) == []

    def test_chain_type3_then_type2(self):
        # One of the depicted degeneration chains: a collision move after a
        # simultaneous-expansion move.
        top = top_pair((2, 0, 0))
        t3 = [q for mv, q in treepair.enumerate_2moves(top) if mv.kind == 3]
        assert len(t3) == 1
        follow = treepair.enumerate_2moves(t3[0])
        assert any(mv.kind == 2 for mv, _ in follow)
        t1 = [q for mv, q in treepair.enumerate_2moves(top) if mv.kind == 1]
        assert len(t1) == 1

    def test_every_move_drops_dimension(self):
        for n in [(2, 0, 0), (1, 1, 0), (2, 1)]:
            for p in treepair.enumerate_wn(n).payload.values():
                for mv, q in treepair.enumerate_2moves(p):
                    assert q.dimension() == p.dimension() - 1, (n, mv)

    def test_valence_sum_identity(self):
        for n in [(2, 0, 0), (1, 1, 0), (2, 1), (1, 1, 4, 1, 0)]:
            pairs = (
                treepair.enumerate_wn(n).payload.values()
                if sum(n) + len(n) - 3 <= 2
                else [top_pair(n), TreePair(N11410, WORKED_BUBBLE)]
            )
            for p in pairs:
                assert treepair.seam_valence_sum(p) == len(p.disk_paths()) + sum(p.n) - 1


class TestEnumerate:
    def test_w200(self):
        P = treepair.enumerate_wn((2, 0, 0))
        assert len(P) == 11
        assert P.face_vector() == (5, 5, 1)

    def test_w21(self):
        assert treepair.enumerate_wn((2, 1)).face_vector() == (8, 8, 1)

    def test_w300(self):
        assert treepair.enumerate_wn((3, 0, 0)).face_vector() == (18, 27, 11, 1)

    def test_unique_top(self):
        for n in [(2, 0, 0), (2, 1)]:
            P = treepair.enumerate_wn(n)
            assert P.maximal() == [top_pair(n).key]

    def test_hasse_edges_graded(self):
        for n in [(2, 0, 0), (2, 1), (3, 0, 0)]:
            assert treepair.enumerate_wn(n).is_graded_by_covers()


class TestCollapse:
    def test_w3_matches_k3(self):
        assert treepair.enumerate_wn((3,)).face_vector() == rrt.enumerate_kr(3).face_vector()

    def test_w4_matches_k4(self):
        W = treepair.enumerate_wn((4,))
        K = rrt.enumerate_kr(4)
        assert len(W) == len(K) == 11
        mapping = {k: rrt.serialize(treepair.collapse_to_kn(p)) for k, p in W.payload.items()}
        from twoassoc import poset

        assert poset.is_order_isomorphism(W, K, mapping)

    def test_roundtrip_on_w5(self):
        for p in treepair.enumerate_wn((5,)).payload.values():
            assert treepair.inflate_from_kn(treepair.collapse_to_kn(p)).key == p.key

    def test_wrong_arity(self):
        with pytest.raises(ValidationError) as exc:
            treepair.collapse_to_kn(top_pair((1, 1)))
        assert exc.value.code == "WrongArity"


def test_mirror_involution():
    for n in [(2, 1), (2, 0, 0), (1, 1, 4, 1, 0)]:
        p = top_pair(n) if n != (1, 1, 4, 1, 0) else TreePair(N11410, WORKED_BUBBLE)
        assert treepair.mirror_pair(treepair.mirror_pair(p)).key == p.key
