"""Projection, avatars, sub-pair extraction, verified decompositions."""

import itertools

import pytest

from twoassoc import bracketing, poset, rrt, structure, treepair, twobracketing
from twoassoc.errors import ValidationError
from twoassoc.rrt import corolla
from twoassoc.treepair import C2, MARK, top_pair


class TestForgetful:
    def test_top_face_projects_to_corolla(self):
        for n in [(2, 0, 0), (2, 1)]:
            assert structure.forgetful_pi(top_pair(n)) == corolla(len(n))

    def test_surjective_onto_k3_over_w200(self):
        W = treepair.enumerate_wn((2, 0, 0))
        images = {rrt.serialize(structure.forgetful_pi(p)) for p in W.payload.values()}
        assert images == set(rrt.enumerate_kr(3).dims)

    def test_monotone_on_w200(self):
        W = treepair.enumerate_wn((2, 0, 0))
        K = rrt.enumerate_kr(3)
        for a, b in W.covers:
            ka = rrt.serialize(W.payload[a].seam)
            kb = rrt.serialize(W.payload[b].seam)
            assert K.leq(ka, kb)

    def test_commutes_with_bracket_models_on_w110(self):
        for p in treepair.enumerate_wn((1, 1, 0)).payload.values():
            lhs = bracketing.nu(structure.forgetful_pi(p))
            rhs = structure.forgetful_pi(twobracketing.two_nu(p))
            assert lhs == rhs


class TestAvatar:
    def test_identity_on_equal_pairs(self):
        p = top_pair((2, 0, 0))
        for sp in rrt.leaf_spans(p.seam):
            assert structure.avatar(p, p, ("seam", sp)) == sp
        for bp in sorted(p.kind):
            if p.kind[bp] in (C2, MARK):
                assert structure.avatar(p, p, ("bubble", bp)) == bp

    def test_root_goes_to_root_on_covers(self):
        W = treepair.enumerate_wn((2, 0, 0))
        for lo, hi in W.covers:
            assert structure.avatar(W.payload[hi], W.payload[lo], ("seam", ())) == ()

    def test_not_below(self):
        W = treepair.enumerate_wn((2, 0, 0))
        verts = [p for p in W.payload.values() if p.dimension() == 0]
        with pytest.raises(ValidationError) as exc:
            structure.avatar(verts[0], verts[1], ("seam", ()))
        assert exc.value.code == "NotBelow"

    def test_exhaustive_on_w110(self):
        W = treepair.enumerate_wn((1, 1, 0))
        for ck, coarse in W.payload.items():
            for fk in list(W.downset(ck)) + [ck]:
                fine = W.payload[fk]
                for sp in rrt.leaf_spans(coarse.seam):
                    structure.avatar(coarse, fine, ("seam", sp))
                for bp in sorted(coarse.kind):
                    if coarse.kind[bp] in (C2, MARK):
                        structure.avatar(coarse, fine, ("bubble", bp))


class TestExtractSubpair:
    def test_self_extraction_gives_top_factor(self):
        W = treepair.enumerate_wn((3, 0))
        for p in W.payload.values():
            for alpha in p.one_seam_disks():
                k = len(rrt.subtree(p.bubble, alpha + (0,)))
                sub = structure.extract_subpair(p, p, ("disk", alpha))
                assert sub.key == top_pair((k,)).key

    def test_seam_anchor_tuples_share_base(self):
        W = treepair.enumerate_wn((3, 0, 0))
        count = 0
        for ck, coarse in W.payload.items():
            anchors = set(rrt.interior_paths(coarse.seam))
            for fk in list(W.downset(ck)) + [ck]:
                fine = W.payload[fk]
                for rho in anchors:
                    base, pairs = structure.extract_subpair(coarse, fine, ("seam", rho))
                    for sub in pairs:
                        assert sub.seam == base
                        count += 1
        assert count > 100

    def test_anchor_not_found(self):
        p = top_pair((2, 0, 0))
        with pytest.raises(ValidationError) as exc:
            structure.extract_subpair(p, p, ("disk", (0, 0)))
        assert exc.value.code == "AnchorNotFound"


class TestGamma2T:
    def test_top_face_decomposition_covers_everything(self):
        for n in [(2, 0, 0), (1, 1, 0)]:
            dec = structure.gamma2T(top_pair(n))
            assert dec.verified
            assert len(dec.image) == len(treepair.enumerate_wn(n))

    def test_all_faces_of_w200_w110_w300(self):
        for n in [(2, 0, 0), (1, 1, 0), (3, 0, 0)]:
            W = treepair.enumerate_wn(n)
            for p in W.payload.values():
                assert structure.gamma2T(p).verified

    def test_green_pentagon_face_of_w300(self):
        # The simultaneous-expansion face whose closure is the fiber product
        # of weights (1,0,0) and (2,0,0) over K_3, times the one-column W_2.
        top = top_pair((3, 0, 0))
        mv = [m for m, _ in treepair.enumerate_2moves(top) if m.kind == 3 and m.parts == ((1, 0, 0), (2, 0, 0))]
        assert len(mv) == 1
        face = treepair.apply_2move(top, mv[0])
        dec = structure.gamma2T(face)
        assert dec.verified
        assert [w for _, w in dec.unary] == [(2,)]
        (rho, arity, members), = dec.groups
        assert arity == 3
        assert [w for _, w in members] == [(1, 0, 0), (2, 0, 0)]
        assert len(dec.image) == 11

    def test_codim1_product_cardinalities_w200(self):
        W = treepair.enumerate_wn((2, 0, 0))
        for p in W.payload.values():
            if p.dimension() != 1:
                continue
            dec = structure.gamma2T(p)
            assert len(dec.image) == len(W.downset(p.key)) + 1


class TestGammaDecompositionK:
    def test_k4_k5_all_faces(self):
        for r in [4, 5]:
            K = rrt.enumerate_kr(r)
            for t in K.payload.values():
                domain, image = structure.gamma_decomposition(t)
                assert len(image) == len(K.downset(rrt.serialize(t))) + 1

    def test_seam_shadow_of_gamma2T(self):
        # Projecting a decomposed face recovers the tree-level substitution.
        W = treepair.enumerate_wn((2, 0, 0))
        for p in W.payload.values():
            dec = structure.gamma2T(p)
            seam_keys = {rrt.serialize(treepair.enumerate_wn(p.n).payload[v].seam) for v in dec.image.values()}
            K = rrt.enumerate_kr(3)
            want = {rrt.serialize(p.seam)} | {k for k in K.downset(rrt.serialize(p.seam))}
            assert seam_keys == want


class TestReversal:
    def test_21_vs_12(self):
        assert structure.reverse_weights((2, 1)).ok

    def test_palindrome_self_map(self):
        chk = structure.reverse_weights((1, 0, 1))
        assert chk.ok and chk.reversed_n == (1, 0, 1)

    def test_210_vs_012_face_vectors(self):
        chk = structure.reverse_weights((2, 1, 0))
        assert chk.ok
        assert treepair.enumerate_wn((2, 1, 0)).face_vector() == (30, 45, 17, 1)
        assert treepair.enumerate_wn((0, 1, 2)).face_vector() == (30, 45, 17, 1)


def test_collapse_check_small():
    for n in range(1, 6):
        assert structure.collapse_check(n)
