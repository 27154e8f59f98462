"""Stable tree-pairs: the tree model of the 2-associahedron W_n.

A bubble tree is stored as nested tuples with three positional kinds:

* a disk vertex (C2) is a nonempty tuple whose entries are its seams,
* a seam vertex is a tuple (possibly empty) whose entries are disks or marks,
* a mark is the empty tuple sitting under a seam.

The root is a disk, except for the one-mark tree of weight (1) which is a
bare mark.  Kinds are therefore positional: an empty tuple under a disk is a
bare seam, an empty tuple under a seam is a mark, and nothing else is
ambiguous.

The structure map onto the seam tree is forced: it contracts every edge into
a seam and every edge into a one-seam disk, and matches the seams of
multi-seam disks sharing a class pairwise.  The quotient this produces is
the seam tree EXCEPT below bare seams, where marked columns have fully
collided and the seam tree may carry any stable refinement that the bubble
cannot see.  A pair therefore stores both trees; ``derive_coherence``
recovers the seam tree from the bubble alone exactly when no such bare
region exists, and the canonical key concatenates both serializations.

Weights: n = (n_1..n_r) where r is the number of seam-tree leaves and n_i
counts the marks over leaf i.  Marks in one column are numbered in depth
first order, which coincides with their stacking order along seams.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import rrt
from .errors import ValidationError
from .poset import GradedPoset
from .rrt import replace_at, subtree

C2, SEAM, MARK = "C2", "SEAM", "MARK"


def kinds(bubble):
    """Positional kind of every vertex path."""
    out = {}

    def visit(node, path, kind):
        out[path] = kind
        for i, c in enumerate(node):
            if kind == C2:
                sub = SEAM
            else:
                sub = MARK if c == () else C2
            visit(c, path + (i,), sub)

    visit(bubble, (), MARK if bubble == () else C2)
    return out


def bubble_key(bubble) -> str:
    """Canonical serialization: kind tags, children in planar order."""

    def enc(node, kind):
        if kind == MARK:
            return "M"
        tag = "C" if kind == C2 else "S"
        inner = []
        for c in node:
            if kind == C2:
                inner.append(enc(c, SEAM))
            else:
                inner.append(enc(c, MARK if c == () else C2))
        return tag + "(" + ",".join(inner) + ")"

    return enc(bubble, MARK if bubble == () else C2)


def _as_nested(bubble):
    if not isinstance(bubble, (tuple, list)):
        raise ValidationError("KindEdgeMismatch", f"bubble node must be a sequence, got {bubble!r}")
    return tuple(_as_nested(c) for c in bubble)


def _check_stability(bubble):
    kind = kinds(bubble)
    for path in sorted(kind):
        if kind[path] != C2:
            continue
        node = subtree(bubble, path)
        if len(node) == 1:
            if len(node[0]) < 2:
                raise ValidationError(
                    "UnstableC2", f"one-seam disk at {path} has a seam with {len(node[0])} < 2 children", witness=path
                )
        else:
            if all(len(s) == 0 for s in node):
                raise ValidationError("UnstableC2", f"multi-seam disk at {path} has only bare seams", witness=path)


def _analyze(bubble, n, seam):
    """Worker for coherence derivation, with or without a supplied seam tree.

    Computes the class quotient of the bubble tree, embeds it into ``seam``
    (or takes the quotient itself as the seam tree when ``seam`` is None,
    which requires that no bare region hides further structure), and labels
    the marks.  Returns (seam_tree, coherence, marks).
    """
    n = tuple(n)
    r = len(n)
    if bubble == ():
        if n != (1,):
            raise ValidationError("MarkCountMismatch", f"a bare mark has weight (1), not {n}")
        if seam is not None and seam != rrt.LEAF:
            raise ValidationError("SeamTreeInvalid", "a bare mark maps onto the one-vertex seam tree")
        return rrt.LEAF, {(): ()}, {(): (1, 1)}

    if seam is not None:
        if not rrt.is_stable(seam):
            raise ValidationError("SeamTreeInvalid", "seam tree must be stable")
        if rrt.leaf_count(seam) != r:
            raise ValidationError("SeamTreeInvalid", f"seam tree has {rrt.leaf_count(seam)} leaves, weight has {r}")

    kind = kinds(bubble)
    allp = sorted(kind)

    parent = {p: p for p in allp}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    multi = []
    for p in allp:
        if kind[p] == SEAM:
            node = subtree(bubble, p)
            for i in range(len(node)):
                union(p, p + (i,))
        elif kind[p] == C2:
            node = subtree(bubble, p)
            if len(node) == 1:
                union(p, p + (0,))
            else:
                multi.append(p)

    while True:
        changed = False
        groups = {}
        for p in multi:
            groups.setdefault(find(p), []).append(p)
        for members in groups.values():
            arities = {len(subtree(bubble, m)) for m in members}
            if len(arities) > 1:
                raise ValidationError(
                    "CoherenceArityMismatch",
                    f"disks {members} share a seam-tree vertex but have arities {sorted(arities)}",
                    witness=tuple(members),
                )
            k = arities.pop()
            for i in range(k):
                reps = sorted({find(m + (i,)) for m in members})
                for other in reps[1:]:
                    union(reps[0], other)
                    changed = True
        if not changed:
            break

    cls_children = {}
    for p in multi:
        cls = find(p)
        kids = tuple(find(p + (i,)) for i in range(len(subtree(bubble, p))))
        cls_children[cls] = kids

    seam_path_of_cls = {}

    def walk(cls, spath, ancestors):
        if cls in ancestors or cls in seam_path_of_cls:
            raise ValidationError("SeamTreeInvalid", "quotient of the bubble tree is not a tree", witness=cls)
        seam_path_of_cls[cls] = spath
        kids = cls_children.get(cls, ())
        if seam is not None and kids:
            have = len(subtree(seam, spath))
            if have != len(kids):
                raise ValidationError(
                    "CoherenceArityMismatch",
                    f"seam tree has {have} children at {spath}, bubble tree forces {len(kids)}",
                    witness=spath,
                )
        for i, kid in enumerate(kids):
            walk(kid, spath + (i,), ancestors | {cls})

    walk(find(()), (), frozenset())

    classes = {find(p) for p in allp}
    if classes != set(seam_path_of_cls):
        raise ValidationError("SeamTreeInvalid", "quotient of the bubble tree is disconnected")

    if seam is None:

        def assemble(cls):
            return tuple(assemble(kid) for kid in cls_children.get(cls, ()))

        seam = assemble(find(()))
        if rrt.leaf_count(seam) != r:
            raise ValidationError(
                "QuotientUnstable",
                f"quotient has {rrt.leaf_count(seam)} seam columns, weight has {r}; "
                "fully collided columns leave the seam tree undetermined, supply it",
            )

    coherence = {p: seam_path_of_cls[find(p)] for p in allp}
    leaf_index = {}
    for spath, span in rrt.leaf_spans(seam).items():
        if subtree(seam, spath) == rrt.LEAF:
            leaf_index[spath] = span[0]

    marks = {}
    seen = [0] * (r + 1)
    for p in allp:
        if kind[p] != MARK:
            continue
        spath = coherence[p]
        if spath not in leaf_index:
            raise ValidationError("MarkCountMismatch", f"mark at {p} sits over an interior seam vertex", witness=p)
        i = leaf_index[spath]
        seen[i] += 1
        marks[p] = (i, seen[i])
    if tuple(seen[1:]) != n:
        raise ValidationError(
            "MarkCountMismatch", f"mark counts per column are {tuple(seen[1:])}, expected {n}", witness=tuple(seen[1:])
        )
    return seam, coherence, marks


def derive_coherence(bubble, n):
    """The forced seam tree and structure map, or None if underdetermined.

    Succeeds exactly when every column of fully collided seams is trivial,
    so the class quotient of the bubble already has one leaf per weight
    entry.  Structural impossibilities (seams of stacked disks that cannot
    be matched, wrong mark counts) raise instead of returning None.
    """
    try:
        seam, coherence, marks = _analyze(bubble, n, None)
    except ValidationError as err:
        if err.code == "QuotientUnstable":
            return None
        raise
    return seam, coherence, marks


class TreePair:
    """A validated bubble tree over its seam tree.

    ``seam`` may be omitted whenever the bubble determines it (no fully
    collided marked columns); the canonical key serializes both trees.
    """

    __slots__ = ("n", "bubble", "seam", "coherence", "marks", "kind", "key")

    def __init__(self, n, bubble, seam=None):
        n = tuple(int(x) for x in n)
        if not n or any(x < 0 for x in n) or not any(n):
            raise ValidationError("MarkCountMismatch", f"weight vector {n} must be nonnegative and nonzero")
        bubble = _as_nested(bubble)
        _check_stability(bubble)
        seam, coherence, marks = _analyze(bubble, n, seam)
        self.n = n
        self.bubble = bubble
        self.seam = seam
        self.coherence = coherence
        self.marks = marks
        self.kind = kinds(bubble)
        self.key = bubble_key(bubble) + "|" + rrt.serialize(seam)

    @property
    def r(self):
        return len(self.n)

    def __eq__(self, other):
        return isinstance(other, TreePair) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"TreePair(n={self.n}, {self.key})"

    def disk_paths(self):
        return [p for p in sorted(self.kind) if self.kind[p] == C2]

    def one_seam_disks(self):
        return [p for p in self.disk_paths() if len(subtree(self.bubble, p)) == 1]

    def multi_seam_disks(self):
        return [p for p in self.disk_paths() if len(subtree(self.bubble, p)) >= 2]

    def seam_paths(self):
        return [p for p in sorted(self.kind) if self.kind[p] == SEAM]

    def mark_paths(self):
        return sorted(self.marks)

    def dimension(self) -> int:
        """|n| + r - (one-seam disks) - (interior seam-tree vertices) - 2."""
        return sum(self.n) + self.r - len(self.one_seam_disks()) - len(rrt.interior_paths(self.seam)) - 2

    def dimension_by_parts(self) -> int:
        """Equivalent local form, summed over disks and seam-tree vertices."""
        total = 0
        for p in self.one_seam_disks():
            total += len(subtree(self.bubble, p)[0]) - 2
        for p in self.multi_seam_disks():
            total += sum(len(s) for s in subtree(self.bubble, p)) - 1
        for q in rrt.interior_paths(self.seam):
            total += len(subtree(self.seam, q)) - 2
        return total


def validate_tree_pair(candidate) -> TreePair:
    """Validate loose tree-pair data: weight, bubble, optional seam/coherence.

    ``candidate`` is a mapping with keys ``n`` and ``bubble`` (nested tuples
    or the kind-tagged dict form) and optionally ``seam`` and ``coherence``
    to be checked against the derived ones.
    """
    n = candidate["n"]
    raw = candidate["bubble"]
    bubble = bubble_from_tagged(raw) if isinstance(raw, dict) else _as_nested(raw)
    seam = candidate.get("seam")
    if seam is not None:
        seam = rrt._as_tuples(seam)
    pair = TreePair(n, bubble, seam=seam)
    if "coherence" in candidate and candidate["coherence"] is not None:
        got = {tuple(k): tuple(v) for k, v in candidate["coherence"].items()}
        if got != pair.coherence:
            bad = sorted(set(got.items()) ^ set(pair.coherence.items()))[0]
            raise ValidationError(
                "CoherenceNotContracting", f"supplied structure map disagrees with the forced quotient at {bad}",
                witness=bad,
            )
    return pair


def bubble_from_tagged(node, expected=None):
    """Convert the {'kind':…, 'children':…} form, checking kind placement."""
    if not isinstance(node, dict) or "kind" not in node:
        raise ValidationError("KindEdgeMismatch", f"expected a tagged node, got {node!r}")
    kind = node["kind"]
    children = node.get("children", [])
    if expected is None and kind not in (C2, MARK):
        raise ValidationError("KindEdgeMismatch", f"root must be {C2} or {MARK}, got {kind}")
    if expected is not None and kind not in expected:
        raise ValidationError("KindEdgeMismatch", f"vertex of kind {kind} where {expected} allowed")
    if kind == MARK:
        if children:
            raise ValidationError("KindEdgeMismatch", "marks have no incoming edges")
        return ()
    if kind == C2:
        if not children:
            raise ValidationError("KindEdgeMismatch", "a disk needs at least one seam")
        return tuple(bubble_from_tagged(c, expected=(SEAM,)) for c in children)
    return tuple(bubble_from_tagged(c, expected=(C2, MARK)) for c in children)


def top_pair(n) -> TreePair:
    """The unique maximal face: one disk, one seam per column, marks in order."""
    n = tuple(n)
    if n == (1,):
        return TreePair(n, ())
    return TreePair(n, tuple(((),) * ni for ni in n))


@dataclass(frozen=True)
class TwoMove:
    """A single degeneration step on a stable tree-pair.

    kind 1: bubble the block [start, start+length) of children off the seam
    at ``anchor`` (a bubble path) into a fresh one-seam disk.
    kind 3: collapse all seams of the multi-seam disk at ``anchor`` into one,
    stacking new disks whose per-seam loads are given by ``parts``.
    kind 2: collapse the block [start, start+length) of the seam-tree vertex
    ``anchor``; ``parts`` pairs every affected multi-seam disk path with its
    own stack of per-seam loads.
    """

    kind: int
    anchor: tuple
    start: int = 0
    length: int = 0
    parts: tuple = ()


def vector_compositions(a, min_parts=0):
    """Ordered tuples of nonzero componentwise-nonnegative vectors summing to a."""
    a = tuple(a)
    out = []

    def rec(remaining, acc):
        if not any(remaining):
            if len(acc) >= min_parts:
                out.append(tuple(acc))
            return
        for b in itertools.product(*[range(x + 1) for x in remaining]):
            if any(b):
                rec(tuple(x - y for x, y in zip(remaining, b)), acc + [b])

    rec(a, [])
    return out


def _stack_disks(seam_blocks, parts):
    """Children of a fresh seam: one disk per part, loads cut consecutively."""
    offs = [0] * len(seam_blocks)
    disks = []
    for b in parts:
        seams = []
        for i, cnt in enumerate(b):
            seams.append(seam_blocks[i][offs[i] : offs[i] + cnt])
            offs[i] += cnt
        disks.append(tuple(seams))
    assert offs == [len(s) for s in seam_blocks]
    return tuple(disks)


def apply_2move(p: TreePair, mv: TwoMove) -> TreePair:
    bubble = p.bubble
    if mv.kind == 1:
        node = subtree(bubble, mv.anchor)
        block = node[mv.start : mv.start + mv.length]
        new_disk = (block,)
        new = node[: mv.start] + (new_disk,) + node[mv.start + mv.length :]
        return TreePair(p.n, replace_at(bubble, mv.anchor, new), seam=p.seam)
    if mv.kind == 3:
        node = subtree(bubble, mv.anchor)
        seam = _stack_disks(list(node), mv.parts)
        return TreePair(p.n, replace_at(bubble, mv.anchor, (seam,)), seam=p.seam)
    if mv.kind == 2:
        # Deepest disks first so shallower rebuilds see updated subtrees.
        for disk_path, parts in sorted(mv.parts, key=lambda t: -len(t[0])):
            node = subtree(bubble, disk_path)
            seam = _stack_disks(list(node[mv.start : mv.start + mv.length]), parts)
            new = node[: mv.start] + (seam,) + node[mv.start + mv.length :]
            bubble = replace_at(bubble, disk_path, new)
        new_seam = rrt.apply_move(p.seam, rrt.Move(mv.anchor, mv.start, mv.length))
        return TreePair(p.n, bubble, seam=new_seam)
    raise ValidationError("KindEdgeMismatch", f"unknown move kind {mv.kind}")


def enumerate_2moves(p: TreePair):
    """All legal single moves; every result is valid with dimension one less."""
    out = []
    bubble = p.bubble
    for alpha in p.disk_paths():
        node = subtree(bubble, alpha)
        top_l_bonus = 1 if len(node) >= 2 else 0
        for bi, beta in enumerate(node):
            k = len(beta)
            for l in range(2, k + top_l_bonus):
                for st in range(k - l + 1):
                    mv = TwoMove(1, alpha + (bi,), st, l)
                    out.append((mv, apply_2move(p, mv)))
    for alpha in p.multi_seam_disks():
        node = subtree(bubble, alpha)
        a = tuple(len(s) for s in node)
        for parts in vector_compositions(a, min_parts=2):
            mv = TwoMove(3, alpha, parts=parts)
            out.append((mv, apply_2move(p, mv)))
    for rho in rrt.interior_paths(p.seam):
        k = len(subtree(p.seam, rho))
        if k < 3:
            continue
        disks = [q for q in p.multi_seam_disks() if p.coherence[q] == rho]
        for l in range(2, k):
            for st in range(k - l + 1):
                options = []
                for d in disks:
                    node = subtree(bubble, d)
                    a = tuple(len(s) for s in node[st : st + l])
                    options.append([(d, parts) for parts in vector_compositions(a, min_parts=0)])
                for combo in itertools.product(*options):
                    mv = TwoMove(2, rho, st, l, parts=tuple(combo))
                    out.append((mv, apply_2move(p, mv)))
    return out


def codim1_faces(p: TreePair):
    """Distinct move results with the full list of moves reaching each."""
    groups = {}
    for mv, q in enumerate_2moves(p):
        groups.setdefault(q.key, (q, []))[1].append(mv)
    return [(pair, tuple(moves)) for _, (pair, moves) in sorted(groups.items())]


@lru_cache(maxsize=None)
def enumerate_wn(n) -> GradedPoset:
    """Breadth-first closure of the moves from the top face of W_n.

    Keys are canonical bubble serializations, covers are single moves and
    payload maps keys to TreePair values.  Cached per weight vector; the
    returned poset must be treated read-only.
    """
    top = top_pair(n)
    dims = {top.key: top.dimension()}
    payload = {top.key: top}
    covers = set()
    frontier = [top]
    while frontier:
        fresh = []
        for p in frontier:
            for q, _moves in codim1_faces(p):
                covers.add((q.key, p.key))
                if q.key not in dims:
                    dims[q.key] = q.dimension()
                    payload[q.key] = q
                    fresh.append(q)
        frontier = fresh
    return GradedPoset(dims, covers, payload=payload)


def collapse_to_kn(p: TreePair):
    """For one-column pairs: fuse every disk with its seam, keeping marks as leaves."""
    if p.r != 1:
        raise ValidationError("WrongArity", f"needs a single seam column, weight is {p.n}")

    def conv(node):
        if node == ():
            return rrt.LEAF
        (seam,) = node
        return tuple(conv(c) for c in seam)

    return conv(p.bubble)


def inflate_from_kn(tree) -> TreePair:
    """Inverse of collapse: wrap every interior vertex in its own disk."""

    def conv(node):
        if node == rrt.LEAF:
            return ()
        return (tuple(conv(c) for c in node),)

    if tree == rrt.LEAF:
        return TreePair((1,), ())
    return TreePair((rrt.leaf_count(tree),), conv(tree))


def mirror_pair(p: TreePair) -> TreePair:
    """Reverse every planar order; the weight vector reverses with it."""

    def mirror(node):
        return tuple(mirror(c) for c in reversed(node))

    return TreePair(tuple(reversed(p.n)), mirror(p.bubble), seam=mirror(p.seam))


def seam_valence_sum(p: TreePair) -> int:
    """Total children over all seams; equals #disks + |n| - 1 on valid pairs."""
    return sum(len(subtree(p.bubble, s)) for s in p.seam_paths())
