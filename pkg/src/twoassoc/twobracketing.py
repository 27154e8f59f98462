"""2-bracketings: the bracket model of the 2-associahedron W_n.

A 2-bracket groups marks: it has a width, a consecutive run of columns, and
per covered column a consecutive (possibly empty) run of mark indices, not
all empty.  A 2-bracketing is a 1-bracketing of the columns plus a family of
2-brackets subject to five axioms (widths occur in the 1-bracketing; row
overlap forces nesting; the full bracket and all single marks are present;
per-width coverage with a refinement clause; and per-width strict partial
orders whose comparability is exactly rowwise disjointness, which order
single marks by index and are inherited into wider brackets).  Coarser
families sit higher: x <= y means x contains y's brackets and orders.

``two_nu`` and ``two_tau`` translate to and from stable tree-pairs, and
``oracle_enumerate`` rebuilds W_n by exhaustive search over the finite
universe of 2-brackets, with no reference to moves.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from . import bracketing, rrt, treepair
from .errors import BoundExceeded, ValidationError
from .poset import GradedPoset
from .rrt import subtree
from .treepair import C2, MARK, SEAM, TreePair


@dataclass(frozen=True)
class TwoBracket:
    lo: int
    hi: int
    rows: tuple  # one (jlo, jhi) or None per column lo..hi

    @property
    def width(self):
        return (self.lo, self.hi)

    def row(self, i):
        if self.lo <= i <= self.hi:
            return self.rows[i - self.lo]
        return None

    def contains(self, other) -> bool:
        if not (self.lo <= other.lo and other.hi <= self.hi):
            return False
        for i in range(other.lo, other.hi + 1):
            r = other.row(i)
            if r is None:
                continue
            mine = self.row(i)
            if mine is None or not (mine[0] <= r[0] and r[1] <= mine[1]):
                return False
        return True

    def properly_contains(self, other) -> bool:
        return self != other and self.contains(other)

    def rows_disjoint(self, other) -> bool:
        """No shared mark in any shared column."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        for i in range(lo, hi + 1):
            a, b = self.row(i), other.row(i)
            if a is not None and b is not None and a[0] <= b[1] and b[0] <= a[1]:
                return False
        return True

    def is_mark(self) -> bool:
        return self.lo == self.hi and self.rows[0] is not None and self.rows[0][0] == self.rows[0][1]

    def sort_key(self):
        return (self.lo, self.hi, tuple((-1, -1) if r is None else r for r in self.rows))


def make_bracket(lo, hi, rows) -> TwoBracket:
    rows = tuple(tuple(r) if r else None for r in rows)
    if hi < lo or len(rows) != hi - lo + 1:
        raise ValidationError("NotConsecutive", f"width ({lo},{hi}) needs {hi - lo + 1} rows")
    if all(r is None for r in rows):
        raise ValidationError("NotConsecutive", "a 2-bracket needs a nonempty row")
    for r in rows:
        if r is not None and r[1] < r[0]:
            raise ValidationError("NotConsecutive", f"bad row {r}")
    return TwoBracket(lo, hi, rows)


def mark_bracket(i, j) -> TwoBracket:
    return TwoBracket(i, i, ((j, j),))


def root_bracket(n) -> TwoBracket:
    return TwoBracket(1, len(n), tuple((1, ni) if ni else None for ni in n))


class TwoBracketing:
    """Weight vector, 1-bracketing spans, 2-brackets, per-width strict orders.

    Orders are stored transitively closed as sets of (smaller, larger)
    pairs; equality and hashing go through the canonical key.
    """

    __slots__ = ("n", "brackets1", "brackets2", "orders", "key")

    def __init__(self, n, brackets1, brackets2, orders):
        self.n = tuple(int(x) for x in n)
        self.brackets1 = tuple(sorted(tuple(s) for s in brackets1))
        self.brackets2 = frozenset(brackets2)
        closed = {}
        for w, pairs in orders.items():
            pairs = set(tuple(p) for p in pairs)
            while True:
                extra = {(a, d) for a, b in pairs for c, d in pairs if b == c and a != d and (a, d) not in pairs}
                if not extra:
                    break
                pairs |= extra
            if pairs:
                closed[tuple(w)] = frozenset(pairs)
        self.orders = closed
        by2 = sorted(self.brackets2, key=TwoBracket.sort_key)
        idx = {b: i for i, b in enumerate(by2)}
        self.key = json.dumps(
            [
                list(self.n),
                [list(s) for s in self.brackets1],
                [[b.lo, b.hi, [list(r) if r else None for r in b.rows]] for b in by2],
                sorted(
                    [list(w), sorted([idx[a], idx[b]] for a, b in pairs)]
                    for w, pairs in self.orders.items()
                ),
            ],
            separators=(",", ":"),
        )

    @property
    def r(self):
        return len(self.n)

    def __eq__(self, other):
        return isinstance(other, TwoBracketing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"TwoBracketing(n={self.n}, {len(self.brackets2)} brackets)"

    def of_width(self, w):
        return sorted((b for b in self.brackets2 if b.width == tuple(w)), key=TwoBracket.sort_key)

    def less(self, w, a, b) -> bool:
        return (a, b) in self.orders.get(tuple(w), frozenset())

    def dimension(self) -> int:
        """Transported grading: counts one-seam disks and interior seam vertices."""
        one_seam = sum(
            1
            for b in self.brackets2
            if any(b.properly_contains(c) for c in self.brackets2 if c.width == b.width)
        )
        interior = sum(1 for lo, hi in self.brackets1 if hi > lo)
        return sum(self.n) + self.r - one_seam - interior - 2


def top_bracketing(n) -> TwoBracketing:
    """The maximal face: full bracket plus single marks, marks ordered by index."""
    n = tuple(n)
    r = len(n)
    spans = [(1, r)] + [(i, i) for i in range(1, r + 1)]
    brackets = {root_bracket(n)} | {mark_bracket(i, j) for i in range(1, r + 1) for j in range(1, n[i - 1] + 1)}
    orders = {
        (i, i): {(mark_bracket(i, j), mark_bracket(i, j2)) for j in range(1, n[i - 1] + 1) for j2 in range(j + 1, n[i - 1] + 1)}
        for i in range(1, r + 1)
        if n[i - 1] >= 2
    }
    return TwoBracketing(n, set(spans), brackets, orders)


def leq(x: TwoBracketing, y: TwoBracketing, require_order_agreement=True) -> bool:
    """x <= y: x refines y (more brackets), optionally with matching orders.

    With ``require_order_agreement`` the finer element's per-width orders
    must restrict to the coarser's on shared 2-brackets, which makes <= a
    partial order on valid 2-bracketings.
    """
    if x.n != y.n:
        raise ValidationError("WeightMismatch", f"weights differ: {x.n} vs {y.n}")
    if x.key == y.key:
        return True
    if not (set(x.brackets1) >= set(y.brackets1) and x.brackets2 >= y.brackets2):
        return False
    if require_order_agreement:
        for w, pairs in y.orders.items():
            if not pairs <= x.orders.get(w, frozenset()):
                return False
    return True


def _mark_rows(pair: TreePair, path):
    """Row runs of the 2-bracket read off a disk or mark of a tree-pair."""
    lo, hi = rrt.leaf_spans(pair.seam)[pair.coherence[path]]
    per = {i: [] for i in range(lo, hi + 1)}
    for m, (i, j) in pair.marks.items():
        if m[: len(path)] == path:
            per[i].append(j)
    rows = []
    for i in range(lo, hi + 1):
        js = sorted(per[i])
        if not js:
            rows.append(None)
        else:
            assert js == list(range(js[0], js[-1] + 1)), "marks under one vertex are consecutive"
            rows.append((js[0], js[-1]))
    return TwoBracket(lo, hi, tuple(rows))


def two_nu(pair: TreePair) -> TwoBracketing:
    """Read a 2-bracketing off a tree-pair.

    Disks and marks give the 2-brackets (the marks lying above them, at the
    width of their seam-tree image); two brackets over one seam-tree vertex
    are compared through the seam of the bubble tree where their paths
    branch, lower branch first.
    """
    spans = set(rrt.leaf_spans(pair.seam).values())
    carriers = [p for p in sorted(pair.kind) if pair.kind[p] in (C2, MARK)]
    bracket_of = {p: _mark_rows(pair, p) for p in carriers}
    assert len(set(bracket_of.values())) == len(carriers), "stability separates 2-brackets"

    groups = {}
    for p in carriers:
        groups.setdefault(pair.coherence[p], []).append(p)
    orders = {}
    for spath, members in groups.items():
        w = rrt.leaf_spans(pair.seam)[spath]
        pairs = set()
        for a, b in itertools.combinations(sorted(members), 2):
            ba, bb = bracket_of[a], bracket_of[b]
            if not ba.rows_disjoint(bb):
                continue
            cut = 0
            while cut < min(len(a), len(b)) and a[cut] == b[cut]:
                cut += 1
            meet = a[:cut]
            assert pair.kind[meet] == SEAM, "same-width brackets branch at a seam"
            if a[cut] < b[cut]:
                pairs.add((ba, bb))
            else:
                pairs.add((bb, ba))
        if pairs:
            orders.setdefault(w, set()).update(pairs)
    return TwoBracketing(pair.n, spans, set(bracket_of.values()), orders)


def two_tau(b: TwoBracketing) -> TreePair:
    """Rebuild the tree-pair: brackets nest into disks and seams.

    A bracket with a proper same-width sub-bracket becomes a one-seam disk
    whose seam carries the maximal such sub-brackets in stored order; any
    other bracket becomes a disk with one seam per maximal proper sub-span
    of its width, carrying the maximal brackets of that exact width.  The
    seam tree is the nesting tree of the spans.
    """
    n = b.n
    r = b.r
    seam_tree = bracketing.tau(bracketing.OneBracketing(r, b.brackets1))
    all2 = sorted(b.brackets2, key=TwoBracket.sort_key)
    span_set = set(b.brackets1)

    def maximal_inside(outer, width):
        inside = [m for m in all2 if m.width == width and outer.properly_contains(m)]
        return [m for m in inside if not any(z.properly_contains(m) and outer.properly_contains(z) for z in all2)]

    def sub_spans(span):
        lo, hi = span
        subs = [s for s in span_set if s != span and lo <= s[0] and s[1] <= hi]
        return sorted(s for s in subs if not any(t != s and t != span and t[0] <= s[0] and s[1] <= t[1] for t in subs))

    def ordered(width, members):
        rel = b.orders.get(tuple(width), frozenset())
        return sorted(members, key=lambda m: (sum(1 for x in members if (x, m) in rel), m.sort_key()))

    def build_disk(bk):
        same = [m for m in all2 if m.width == bk.width and bk.properly_contains(m)]
        if same:
            return (build_seam(bk, bk.width),)
        return tuple(build_seam(bk, s) for s in sub_spans(bk.width))

    def build_seam(bk, span):
        members = ordered(span, maximal_inside(bk, span))
        return tuple(() if m.is_mark() else build_disk(m) for m in members)

    root = root_bracket(n)
    if root.is_mark():
        return TreePair(n, ())
    bubble = build_disk(root)
    return TreePair(n, bubble, seam=seam_tree)


def validate_2bracketing(cand: TwoBracketing) -> TwoBracketing:
    """Check the five axioms plus order sanity, in a fixed report order.

    Violations raise with codes "1-bracketing", "2-bracketing",
    "root-and-marked-points", "marked-seams-are-unfused", "partial-order",
    or the order-specific OrderNotTransitive / OrderComparabilityMismatch,
    carrying a minimal witness.
    """
    n = cand.n
    r = cand.r
    bracketing.from_spans(r, cand.brackets1)
    for bk in sorted(cand.brackets2, key=TwoBracket.sort_key):
        for i in range(bk.lo, bk.hi + 1):
            row = bk.row(i)
            if row is not None and not (1 <= row[0] <= row[1] <= n[i - 1]):
                raise ValidationError("NotConsecutive", f"row {row} leaves column {i} of weight {n[i-1]}", witness=bk)

    ordered2 = sorted(cand.brackets2, key=TwoBracket.sort_key)
    span_set = set(cand.brackets1)
    for bk in ordered2:
        if bk.width not in span_set:
            raise ValidationError("1-bracketing", f"width {bk.width} is not a 1-bracket of the family", witness=bk)

    for a, bkb in itertools.combinations(ordered2, 2):
        if not a.rows_disjoint(bkb) and not (a.contains(bkb) or bkb.contains(a)):
            raise ValidationError("2-bracketing", f"{a} and {bkb} share a mark but do not nest", witness=(a, bkb))

    if root_bracket(n) not in cand.brackets2:
        raise ValidationError("root-and-marked-points", "full 2-bracket is missing")
    for i in range(1, r + 1):
        for j in range(1, n[i - 1] + 1):
            if mark_bracket(i, j) not in cand.brackets2:
                raise ValidationError("root-and-marked-points", f"mark ({i},{j}) is missing", witness=(i, j))

    by_width = {}
    for bk in ordered2:
        by_width.setdefault(bk.width, []).append(bk)
    for w in cand.brackets1:
        members = by_width.get(tuple(w), [])
        for i in range(w[0], w[1] + 1):
            got = set()
            for bk in members:
                row = bk.row(i)
                if row is not None:
                    got |= set(range(row[0], row[1] + 1))
            if got != set(range(1, n[i - 1] + 1)):
                raise ValidationError(
                    "marked-seams-are-unfused", f"width {tuple(w)} leaves column {i} uncovered", witness=(tuple(w), i)
                )
    for w, members in by_width.items():
        for bk in members:
            if not any(bk.properly_contains(m) for m in members):
                continue
            for i in range(bk.lo, bk.hi + 1):
                row = bk.row(i)
                if row is None:
                    continue
                for j in range(row[0], row[1] + 1):
                    ok = any(
                        bk.properly_contains(m) and m.row(i) is not None and m.row(i)[0] <= j <= m.row(i)[1]
                        for m in members
                    )
                    if not ok:
                        raise ValidationError(
                            "marked-seams-are-unfused",
                            f"mark ({i},{j}) of {bk} has no refining same-width bracket",
                            witness=(bk, i, j),
                        )

    for w, members in sorted(by_width.items()):
        rel = cand.orders.get(w, frozenset())
        memberset = set(members)
        for a, bkb in rel:
            if a not in memberset or bkb not in memberset:
                raise ValidationError(
                    "OrderComparabilityMismatch", f"order on width {w} mentions a foreign bracket", witness=(a, bkb)
                )
            if a == bkb:
                raise ValidationError("OrderNotTransitive", f"reflexive pair on width {w}", witness=a)
            if (bkb, a) in rel:
                raise ValidationError("OrderNotTransitive", f"two-cycle on width {w}", witness=(a, bkb))
        for a, bkb in itertools.combinations(members, 2):
            disjoint = a.rows_disjoint(bkb)
            comparable = (a, bkb) in rel or (bkb, a) in rel
            if disjoint and not comparable:
                raise ValidationError(
                    "OrderComparabilityMismatch", f"disjoint brackets unordered on width {w}", witness=(a, bkb)
                )
            if comparable and not disjoint:
                raise ValidationError(
                    "OrderComparabilityMismatch", f"overlapping brackets ordered on width {w}", witness=(a, bkb)
                )

    for i in range(1, r + 1):
        rel = cand.orders.get((i, i), frozenset())
        for j in range(1, n[i - 1] + 1):
            for j2 in range(j + 1, n[i - 1] + 1):
                if (mark_bracket(i, j), mark_bracket(i, j2)) not in rel:
                    raise ValidationError(
                        "partial-order", f"marks ({i},{j}) and ({i},{j2}) not ordered by index", witness=(i, j, j2)
                    )

    for w, rel in sorted(cand.orders.items()):
        for a, bkb in sorted(rel, key=lambda p: (p[0].sort_key(), p[1].sort_key())):
            for w2, members in sorted(by_width.items()):
                for xa in members:
                    if not a.contains(xa):
                        continue
                    for xb in members:
                        if xa is xb or not bkb.contains(xb):
                            continue
                        if (xa, xb) not in cand.orders.get(w2, frozenset()):
                            raise ValidationError(
                                "partial-order",
                                f"order {a} < {bkb} is not inherited by {xa} < {xb}",
                                witness=(a, bkb, xa, xb),
                            )
    return cand


def _one_bracketing_families(r):
    optional = [(lo, hi) for lo in range(1, r + 1) for hi in range(lo + 1, r + 1) if (lo, hi) != (1, r)]
    base = [(1, r)] + [(i, i) for i in range(1, r + 1)]
    for bits in itertools.product((0, 1), repeat=len(optional)):
        chosen = [s for s, b in zip(optional, bits) if b]
        ok = True
        for a, b in itertools.combinations(chosen, 2):
            lo = max(a[0], b[0])
            hi = min(a[1], b[1])
            if lo <= hi and not (a[0] <= b[0] and b[1] <= a[1]) and not (b[0] <= a[0] and a[1] <= b[1]):
                ok = False
                break
        if ok:
            yield tuple(sorted(set(base) | set(chosen)))


def _width_universe(n, w):
    lo, hi = w
    per_col = []
    for i in range(lo, hi + 1):
        runs = [None] + [(a, b) for a in range(1, n[i - 1] + 1) for b in range(a, n[i - 1] + 1)]
        per_col.append(runs)
    out = []
    for rows in itertools.product(*per_col):
        if any(r is not None for r in rows):
            out.append(TwoBracket(lo, hi, tuple(rows)))
    return out


def _set_axioms_hold(n, spans, brackets):
    ordered2 = sorted(brackets, key=TwoBracket.sort_key)
    for a, b in itertools.combinations(ordered2, 2):
        if not a.rows_disjoint(b) and not (a.contains(b) or b.contains(a)):
            return False
    by_width = {}
    for bk in ordered2:
        by_width.setdefault(bk.width, []).append(bk)
    for w in spans:
        members = by_width.get(tuple(w), [])
        for i in range(w[0], w[1] + 1):
            got = set()
            for bk in members:
                row = bk.row(i)
                if row is not None:
                    got |= set(range(row[0], row[1] + 1))
            if got != set(range(1, n[i - 1] + 1)):
                return False
    for members in by_width.values():
        for bk in members:
            if not any(bk.properly_contains(m) for m in members):
                continue
            for i in range(bk.lo, bk.hi + 1):
                row = bk.row(i)
                if row is None:
                    continue
                for j in range(row[0], row[1] + 1):
                    if not any(
                        bk.properly_contains(m) and m.row(i) is not None and m.row(i)[0] <= j <= m.row(i)[1]
                        for m in members
                    ):
                        return False
    return True


def _order_assignments(n, spans, brackets):
    """All order families making the candidate a valid 2-bracketing.

    Orientation variables live on rowwise-disjoint same-width pairs.  Mark
    pairs are forced by index; inheritance makes the orientation of a pair
    and of any contained pair equal, which is a parity union-find; remaining
    components are enumerated and each full assignment is kept if its widths
    close transitively.
    """
    by_width = {}
    for bk in sorted(brackets, key=TwoBracket.sort_key):
        by_width.setdefault(bk.width, []).append(bk)
    variables = []
    var_id = {}
    for w, members in sorted(by_width.items()):
        for a, b in itertools.combinations(members, 2):
            if a.rows_disjoint(b):
                var_id[(a, b)] = len(variables)
                variables.append((w, a, b))

    # Parity union-find: same[i] links to a representative with a flip bit.
    parent = list(range(len(variables)))
    flip = [0] * len(variables)

    def find(i):
        if parent[i] == i:
            return i, 0
        root, f = find(parent[i])
        parent[i] = root
        flip[i] ^= f
        return root, flip[i]

    def union(i, j, parity):
        ri, fi = find(i)
        rj, fj = find(j)
        if ri == rj:
            return fi ^ fj == parity
        parent[rj] = ri
        flip[rj] = fi ^ fj ^ parity
        return True

    def var_of(a, b):
        if (a, b) in var_id:
            return var_id[(a, b)], 0
        if (b, a) in var_id:
            return var_id[(b, a)], 1
        return None, None

    consistent = True
    for idx, (w, a, b) in enumerate(variables):
        for w2, members in by_width.items():
            for xa in members:
                if not a.contains(xa):
                    continue
                for xb in members:
                    if xa == xb or not b.contains(xb):
                        continue
                    j, par = var_of(xa, xb)
                    if j is None:
                        # Contained pair must be comparable but is not disjoint.
                        consistent = False
                        break
                    if not union(idx, j, par):
                        consistent = False
                        break
                if not consistent:
                    break
            if not consistent:
                break
        if not consistent:
            break
    if not consistent:
        return

    fixed = {}
    for i in range(1, len(n) + 1):
        for j in range(1, n[i - 1] + 1):
            for j2 in range(j + 1, n[i - 1] + 1):
                k, par = var_of(mark_bracket(i, j), mark_bracket(i, j2))
                if k is None:
                    continue
                root, f = find(k)
                want = (par == 0) ^ (f == 1)
                if root in fixed and fixed[root] != want:
                    return
                fixed[root] = want

    roots = sorted({find(i)[0] for i in range(len(variables))})
    free = [rt for rt in roots if rt not in fixed]
    for bits in itertools.product((False, True), repeat=len(free)):
        value = dict(fixed)
        value.update(zip(free, bits))
        orders = {}
        ok = True
        for idx, (w, a, b) in enumerate(variables):
            root, f = find(idx)
            forward = value[root] ^ (f == 1)
            orders.setdefault(w, set()).add((a, b) if forward else (b, a))
        for w, rel in orders.items():
            for x, y in rel:
                for y2, z in rel:
                    if y == y2 and x != z and (x, z) not in rel:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            yield orders


def oracle_enumerate(n, bound=6):
    """Every valid 2-bracketing of weight n, by brute force over the universe.

    Enumerates 1-bracketings directly, then subsets of the per-width
    2-bracket universe around the forced root and marks, then admissible
    order families; each candidate passes the full validator.  Refuses when
    |n| + r exceeds ``bound``.
    """
    n = tuple(n)
    r = len(n)
    if sum(n) + r > bound:
        raise BoundExceeded(f"|n| + r = {sum(n) + r} exceeds the oracle bound {bound}")
    out = []
    forced = {root_bracket(n)} | {mark_bracket(i, j) for i in range(1, r + 1) for j in range(1, n[i - 1] + 1)}
    for spans in _one_bracketing_families(r):
        universe = []
        for w in spans:
            universe.extend(_width_universe(n, w))
        free = [bk for bk in universe if bk not in forced]
        for bits in itertools.product((0, 1), repeat=len(free)):
            brackets = forced | {bk for bk, b in zip(free, bits) if b}
            if not _set_axioms_hold(n, spans, brackets):
                continue
            for orders in _order_assignments(n, spans, brackets):
                cand = TwoBracketing(n, spans, brackets, orders)
                validate_2bracketing(cand)
                out.append(cand)
    return out


@lru_cache(maxsize=None)
def oracle_poset(n, bound=6) -> GradedPoset:
    """The oracle's face set as a graded poset under bracket containment."""
    faces = oracle_enumerate(n, bound)
    dims = {f.key: f.dimension() for f in faces}
    payload = {f.key: f for f in faces}
    by_key = sorted(faces, key=lambda f: f.key)
    covers = []
    for a in by_key:
        for b in by_key:
            if a.key == b.key or not leq(a, b):
                continue
            if not any(c.key not in (a.key, b.key) and leq(a, c) and leq(c, b) for c in by_key):
                covers.append((a.key, b.key))
    return GradedPoset(dims, covers, payload=payload)
