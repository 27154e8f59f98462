"""Interval bracketings and the tree correspondence."""

import itertools

import pytest

from twoassoc import bracketing, rrt
from twoassoc.errors import ValidationError
from twoassoc.rrt import LEAF, corolla


def test_minimal_family_valid():
    b = bracketing.validate_1bracketing(3, [[1, 2, 3], [1], [2], [3]])
    assert b.brackets == ((1, 1), (1, 3), (2, 2), (3, 3))


def test_with_one_pair_valid():
    b = bracketing.validate_1bracketing(3, [[1, 2, 3], [1], [2], [3], [1, 2]])
    assert (1, 2) in b


def test_crossing_pair_overlap():
    with pytest.raises(ValidationError) as exc:
        bracketing.validate_1bracketing(3, [[1, 2, 3], [1], [2], [3], [1, 2], [2, 3]])
    assert exc.value.code == "Overlap"
    assert exc.value.witness == ((1, 2), (2, 3))


@pytest.mark.parametrize(
    "brackets,code",
    [
        ([[1], [2], [3]], "MissingRoot"),
        ([[1, 2, 3], [1], [3]], "MissingLeaf"),
        ([[1, 2, 3], [1], [2], [3], [1, 3]], "NotConsecutive"),
    ],
)
def test_axiom_codes(brackets, code):
    with pytest.raises(ValidationError) as exc:
        bracketing.validate_1bracketing(3, [set(b) for b in brackets])
    assert exc.value.code == code


class TestNu:
    def test_corolla4(self):
        b = bracketing.nu(corolla(4))
        assert b.brackets == ((1, 1), (1, 4), (2, 2), (3, 3), (4, 4))

    def test_subtree_adds_bracket(self):
        b = bracketing.nu(((LEAF, LEAF), LEAF))
        assert (1, 2) in b

    def test_bracket_count_is_vertex_count_on_k4(self):
        for t in rrt.enumerate_kr(4).payload.values():
            assert len(bracketing.nu(t).brackets) == rrt.vertex_count(t)


class TestTau:
    def test_minimal_gives_corolla(self):
        for r in range(2, 6):
            b = bracketing.from_spans(r, [(1, r)] + [(i, i) for i in range(1, r + 1)])
            assert bracketing.tau(b) == corolla(r)

    def test_roundtrip_on_k4(self):
        for t in rrt.enumerate_kr(4).payload.values():
            assert bracketing.tau(bracketing.nu(t)) == t

    def test_refinement_maps_down(self):
        K = rrt.enumerate_kr(4)
        items = sorted(K.payload.items())
        for (ka, ta), (kb, tb) in itertools.product(items, repeat=2):
            if ka == kb:
                continue
            ba, bb = bracketing.nu(ta), bracketing.nu(tb)
            if ba.is_refinement_of(bb):
                assert K.leq(ka, kb)


def test_nu_is_poset_isomorphism_up_to_r5():
    for r in range(2, 6):
        P = rrt.enumerate_kr(r)
        items = sorted(P.payload.items())
        for (ka, ta), (kb, tb) in itertools.product(items, repeat=2):
            finer = bracketing.nu(ta).is_refinement_of(bracketing.nu(tb))
            assert finer == P.leq(ka, kb)
            if finer and P.leq(kb, ka):
                assert ka == kb


def test_dimension_formula():
    for r in range(2, 6):
        for t in rrt.enumerate_kr(r).payload.values():
            assert bracketing.nu(t).dimension() == rrt.dimension(t)


def test_roundtrip_other_direction():
    # nu(tau(b)) = b over every bracketing arising from K_5.
    for t in rrt.enumerate_kr(5).payload.values():
        b = bracketing.nu(t)
        assert bracketing.nu(bracketing.tau(b)) == b
