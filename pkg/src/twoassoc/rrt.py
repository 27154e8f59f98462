"""Stable planar rooted trees and the associahedron face poset K_r.

A tree is stored as nested tuples: () is a leaf and an interior vertex is the
tuple of its subtrees in left-to-right order.  Planar isomorphism is literal
equality of encodings, so the compact JSON dump of the nested lists serves as
the canonical key everywhere (leaf = [], root of the document = root of the
tree).  A tree is stable when no vertex has exactly one child; K_r is the set
of stable trees with r leaves, ordered by splitting moves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError
from .poset import GradedPoset

LEAF = ()


def serialize(tree) -> str:
    return json.dumps(_as_lists(tree), separators=(",", ":"))


def deserialize(text: str):
    return _as_tuples(json.loads(text))


def _as_lists(tree):
    return [_as_lists(c) for c in tree]


def _as_tuples(node):
    if not isinstance(node, (list, tuple)):
        raise ValidationError("NotConsecutive", f"tree node must be a list, got {node!r}")
    return tuple(_as_tuples(c) for c in node)


def subtree(tree, path):
    node = tree
    for i in path:
        node = node[i]
    return node


def replace_at(tree, path, new):
    if not path:
        return new
    i = path[0]
    return tree[:i] + (replace_at(tree[i], path[1:], new),) + tree[i + 1 :]


def paths(tree):
    """Preorder list of (path, node) pairs."""
    out = []
    stack = [((), tree)]
    while stack:
        path, node = stack.pop()
        out.append((path, node))
        for i in range(len(node) - 1, -1, -1):
            stack.append((path + (i,), node[i]))
    return out


def interior_paths(tree):
    return [p for p, node in paths(tree) if node]


def leaf_count(tree):
    if tree == LEAF:
        return 1
    return sum(leaf_count(c) for c in tree)


def vertex_count(tree):
    return 1 + sum(vertex_count(c) for c in tree)


def is_stable(tree):
    return all(len(node) != 1 for _, node in paths(tree))


def corolla(r: int):
    """The unique top face: one interior vertex with r leaf children."""
    if r < 1:
        raise ValidationError("NotConsecutive", "leaf count must be positive")
    if r == 1:
        return LEAF
    return (LEAF,) * r


def dimension(tree) -> int:
    """Leaves minus interior vertices minus one."""
    return leaf_count(tree) - len(interior_paths(tree)) - 1


def dimension_by_arities(tree) -> int:
    """Equivalent form: sum over interior vertices of (arity - 2)."""
    return sum(len(subtree(tree, p)) - 2 for p in interior_paths(tree))


def leaf_spans(tree):
    """Map each vertex path to the (lo, hi) range of leaf indices under it, 1-based."""
    spans = {}

    def visit(node, path, lo):
        if node == LEAF:
            spans[path] = (lo, lo)
            return lo + 1
        nxt = lo
        for i, c in enumerate(node):
            nxt = visit(c, path + (i,), nxt)
        spans[path] = (lo, nxt - 1)
        return nxt

    visit(tree, (), 1)
    return spans


def validate_stable_rrt(root, children):
    """Build a stable tree from vertex data: a root id and per-vertex child lists.

    ``children`` maps every vertex to the ordered sequence of its incoming
    neighbors.  Checks, in order: the root is nobody's child; every non-root
    vertex has exactly one parent; parent chains are acyclic; no vertex has
    exactly one child.  Returns the nested-tuple tree.
    """
    children = {v: tuple(cs) for v, cs in children.items()}
    if root not in children:
        children[root] = ()
    vertices = set(children)
    for v, cs in children.items():
        vertices.update(cs)
    for v in vertices:
        children.setdefault(v, ())

    parents = {}
    for v, cs in children.items():
        for c in cs:
            if c == root:
                raise ValidationError("RootIsChild", f"root {root!r} appears in children of {v!r}", witness=v)
            if c in parents:
                raise ValidationError(
                    "OrphanOrMultiParent", f"{c!r} is a child of both {parents[c]!r} and {v!r}", witness=c
                )
            parents[c] = v
    for v in vertices:
        if v != root and v not in parents:
            raise ValidationError("OrphanOrMultiParent", f"{v!r} has no parent", witness=v)

    # Walk down from the root; anything unreachable sits on a parent cycle.
    seen = set()
    stack = [root]
    while stack:
        v = stack.pop()
        if v in seen:
            raise ValidationError("DirectedCycle", f"{v!r} lies on a directed cycle", witness=v)
        seen.add(v)
        stack.extend(children[v])
    if seen != vertices:
        witness = sorted(vertices - seen, key=repr)[0]
        raise ValidationError("DirectedCycle", f"{witness!r} lies on a directed cycle", witness=witness)

    for v in vertices:
        if len(children[v]) == 1:
            raise ValidationError("UnaryVertex", f"{v!r} has exactly one child", witness=v)

    def build(v):
        return tuple(build(c) for c in children[v])

    return build(root)


@dataclass(frozen=True)
class Move:
    """Split the length-l block of children starting at index start off a vertex."""

    path: tuple
    start: int
    length: int


def apply_move(tree, move: Move):
    node = subtree(tree, move.path)
    p, l = move.start, move.length
    block = node[p : p + l]
    return replace_at(tree, move.path, node[:p] + (block,) + node[p + l :])


def enumerate_moves(tree):
    """All legal splitting moves; each result is stable with dimension one less."""
    out = []
    for path in interior_paths(tree):
        k = len(subtree(tree, path))
        for l in range(2, k):
            for p in range(k - l + 1):
                mv = Move(path, p, l)
                out.append((mv, apply_move(tree, mv)))
    return out


@lru_cache(maxsize=None)
def enumerate_kr(r: int) -> GradedPoset:
    """Breadth-first closure of the moves from the corolla, as a graded poset.

    Keys are canonical serializations; covers are single moves; payload maps
    keys back to trees.  The result is cached and must be treated read-only.
    """
    top = corolla(r)
    payload = {serialize(top): top}
    dims = {serialize(top): dimension(top)}
    covers = set()
    frontier = [top]
    while frontier:
        fresh = []
        for t in frontier:
            k1 = serialize(t)
            for _, t2 in enumerate_moves(t):
                k2 = serialize(t2)
                covers.add((k2, k1))
                if k2 not in dims:
                    dims[k2] = dimension(t2)
                    payload[k2] = t2
                    fresh.append(t2)
        frontier = fresh
    return GradedPoset(dims, covers, payload=payload)


def gamma(tree, components):
    """Substitute a tree with matching arity at each interior vertex.

    ``components`` maps every interior vertex path of ``tree`` to a stable
    tree whose leaf count equals that vertex's arity; the substitution grafts
    each component in place of the vertex's corolla, landing in the closure
    of ``tree``.
    """
    want = set(interior_paths(tree))
    if set(components) != want:
        missing = sorted(want.symmetric_difference(components))
        raise ValidationError("ArityMismatch", f"components must cover interior vertices exactly, bad: {missing}")
    for path in want:
        arity = len(subtree(tree, path))
        if leaf_count(components[path]) != arity:
            raise ValidationError(
                "ArityMismatch",
                f"component at {path} has {leaf_count(components[path])} leaves, vertex has arity {arity}",
                witness=path,
            )

    def expand(path):
        node = subtree(tree, path)
        if node == LEAF:
            return LEAF
        slots = [expand(path + (i,)) for i in range(len(node))]
        it = iter(slots)

        def fill(comp):
            if comp == LEAF:
                return next(it)
            return tuple(fill(c) for c in comp)

        return fill(components[path])

    return expand(())


def contraction_hom(fine, coarse):
    """The unique surjective structure map fine -> coarse, or None.

    Exists exactly when ``fine`` is below ``coarse``, i.e. when every leaf
    span of ``coarse`` occurs in ``fine``; the map sends each vertex to the
    vertex of ``coarse`` whose span is smallest containing its own.
    """
    if leaf_count(fine) != leaf_count(coarse):
        raise ValidationError("LeafCountMismatch", "trees have different leaf counts")
    fine_spans = leaf_spans(fine)
    coarse_spans = leaf_spans(coarse)
    if not set(coarse_spans.values()) <= set(fine_spans.values()):
        return None
    targets = sorted(coarse_spans.items(), key=lambda kv: kv[1][1] - kv[1][0])
    mapping = {}
    for path, (lo, hi) in fine_spans.items():
        for cpath, (clo, chi) in targets:
            if clo <= lo and hi <= chi:
                mapping[path] = cpath
                break
    return mapping
