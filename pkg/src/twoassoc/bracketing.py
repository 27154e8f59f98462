"""1-bracketings of {1..r}: the interval model of the associahedron K_r.

A bracket is a nonempty consecutive run of {1..r}, stored as its (lo, hi)
span.  A bracketing is a family of brackets that is pairwise nested or
disjoint and contains the full run and every singleton; finer bracketings
(more brackets) sit lower in the order.  ``nu`` and ``tau`` translate
between stable planar trees and bracketings.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rrt
from .errors import ValidationError


@dataclass(frozen=True, order=True)
class OneBracketing:
    r: int
    brackets: tuple  # sorted (lo, hi) pairs

    def __contains__(self, span):
        return tuple(span) in set(self.brackets)

    def dimension(self):
        """Graded by 2r - #brackets - 1."""
        return 2 * self.r - len(self.brackets) - 1

    def is_refinement_of(self, other) -> bool:
        """Lower in the order: contains every bracket of ``other``."""
        return self.r == other.r and set(self.brackets) >= set(other.brackets)


def span_of(members) -> tuple:
    """The (lo, hi) span of a set of integers, which must be consecutive."""
    elems = sorted(set(members))
    if not elems:
        raise ValidationError("NotConsecutive", "a bracket must be nonempty")
    lo, hi = elems[0], elems[-1]
    if elems != list(range(lo, hi + 1)):
        raise ValidationError("NotConsecutive", f"{elems} is not a consecutive run", witness=tuple(elems))
    return (lo, hi)


def validate_1bracketing(r, brackets) -> OneBracketing:
    """Check the nesting and root-and-leaves axioms over member sets.

    ``brackets`` is an iterable of integer collections.  Violations raise
    with codes NotConsecutive, Overlap, MissingRoot, MissingLeaf; the witness
    is the first offending bracket pair in sorted order.
    """
    spans = set()
    for b in brackets:
        lo, hi = span_of(b)
        if not (1 <= lo and hi <= r):
            raise ValidationError("NotConsecutive", f"bracket ({lo},{hi}) leaves {{1..{r}}}", witness=(lo, hi))
        spans.add((lo, hi))
    ordered = sorted(spans)
    for i, (lo, hi) in enumerate(ordered):
        for lo2, hi2 in ordered[i + 1 :]:
            if lo2 > hi:
                break
            # lo <= lo2 <= hi: nested unless the second pokes out the right end.
            if hi2 > hi and lo2 > lo:
                raise ValidationError(
                    "Overlap", f"brackets ({lo},{hi}) and ({lo2},{hi2}) cross", witness=((lo, hi), (lo2, hi2))
                )
    if (1, r) not in spans:
        raise ValidationError("MissingRoot", f"bracketing lacks the full run (1,{r})")
    for i in range(1, r + 1):
        if (i, i) not in spans:
            raise ValidationError("MissingLeaf", f"bracketing lacks the singleton {{{i}}}", witness=i)
    return OneBracketing(r, tuple(ordered))


def from_spans(r, spans) -> OneBracketing:
    return validate_1bracketing(r, [range(lo, hi + 1) for lo, hi in spans])


def nu(tree) -> OneBracketing:
    """Read off one bracket per vertex: the leaf span under it."""
    if not rrt.is_stable(tree):
        raise ValidationError("UnaryVertex", "tree must be stable")
    spans = rrt.leaf_spans(tree)
    r = rrt.leaf_count(tree)
    distinct = set(spans.values())
    assert len(distinct) == len(spans), "stability makes vertex spans distinct"
    return OneBracketing(r, tuple(sorted(distinct)))


def tau(b: OneBracketing):
    """The inverse of nu: nest the brackets into a stable planar tree."""
    # Parents before children: wider first, then left to right.
    ordered = sorted(b.brackets, key=lambda s: (s[0] - s[1], s[0]))
    children = {s: [] for s in ordered}
    roots = []
    for i, s in enumerate(ordered):
        # The tightest earlier bracket containing s is its parent.
        parent = None
        for t in ordered[:i]:
            if t[0] <= s[0] and s[1] <= t[1] and t != s:
                if parent is None or (t[1] - t[0]) < (parent[1] - parent[0]):
                    parent = t
        if parent is None:
            roots.append(s)
        else:
            children[parent].append(s)
    assert roots == [(1, b.r)]

    def build(s):
        if s[0] == s[1]:
            return rrt.LEAF
        return tuple(build(c) for c in sorted(children[s]))

    return build((1, b.r))
