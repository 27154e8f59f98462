"""Finite graded posets given by covers, and abstract-polytope certification.

Elements are opaque hashable keys.  Each element carries an integer dimension
and the order is generated by the cover relation; reachability along covers
is the only source of comparability.  An abstract polytope is a poset with
least and greatest faces in which every maximal chain has the same length,
every rank-2 interval is a diamond, and every open interval of height at
least 3 is connected through cover-adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TwoAssocError, ValidationError

# Key used for an adjoined least face; dimension -1 by convention.
BOTTOM = "F-1"


class GradedPoset:
    """Poset presented by (element -> dimension) and a set of cover pairs.

    Covers are ``(low, high)`` pairs.  ``payload`` optionally maps keys back
    to richer domain objects; it plays no role in the order.
    """

    def __init__(self, dims, covers, payload=None, has_bottom=False):
        self.dims = dict(dims)
        covers = set(covers)
        for lo, hi in covers:
            if lo not in self.dims or hi not in self.dims:
                raise ValidationError("UnknownElement", f"cover ({lo!r}, {hi!r}) mentions a missing element")
        self.covers = sorted(covers)
        self.payload = payload if payload is not None else {}
        self.has_bottom = has_bottom
        self.upper = {k: [] for k in self.dims}
        self.lower = {k: [] for k in self.dims}
        for lo, hi in self.covers:
            self.upper[lo].append(hi)
            self.lower[hi].append(lo)
        for k in self.dims:
            self.upper[k].sort()
            self.lower[k].sort()
        self._down = None
        self._up = None

    def __len__(self):
        return len(self.dims)

    def __contains__(self, key):
        return key in self.dims

    def elements(self):
        return sorted(self.dims, key=lambda k: (self.dims[k], repr(k)))

    def dim(self, key):
        return self.dims[key]

    def max_dim(self):
        return max(self.dims.values())

    def _downsets(self):
        if self._down is None:
            down = {}
            for k in sorted(self.dims, key=self.dims.get):
                acc = set()
                for lo in self.lower[k]:
                    acc.add(lo)
                    acc |= down[lo]
                down[k] = frozenset(acc)
            self._down = down
        return self._down

    def _upsets(self):
        if self._up is None:
            up = {}
            for k in sorted(self.dims, key=self.dims.get, reverse=True):
                acc = set()
                for hi in self.upper[k]:
                    acc.add(hi)
                    acc |= up[hi]
                up[k] = frozenset(acc)
            self._up = up
        return self._up

    def downset(self, key):
        """All elements strictly below ``key``."""
        return self._downsets()[key]

    def upset(self, key):
        return self._upsets()[key]

    def leq(self, a, b):
        return a == b or a in self._downsets()[b]

    def minimal(self):
        return sorted((k for k in self.dims if not self.lower[k]), key=repr)

    def maximal(self):
        return sorted((k for k in self.dims if not self.upper[k]), key=repr)

    def top(self):
        tops = self.maximal()
        return tops[0] if len(tops) == 1 else None

    def face_vector(self):
        """Face counts per dimension 0..max, the adjoined bottom excluded."""
        top = self.max_dim()
        counts = [0] * (top + 1)
        for k, d in self.dims.items():
            if d >= 0:
                counts[d] += 1
        return tuple(counts)

    def adjoin_bottom(self):
        """Adjoin a least face of dimension -1 under every 0-face."""
        if self.has_bottom:
            raise ValidationError("AlreadyHatted", "poset already has an adjoined bottom")
        dims = dict(self.dims)
        dims[BOTTOM] = -1
        covers = list(self.covers)
        for k, d in self.dims.items():
            if d == 0:
                covers.append((BOTTOM, k))
        return GradedPoset(dims, covers, payload=self.payload, has_bottom=True)

    def interval(self, low, high):
        """The closed interval [low, high] as an induced subposet."""
        if not self.leq(low, high):
            raise ValidationError("NotComparable", f"{low!r} is not below {high!r}")
        keep = (self.downset(high) & self.upset(low)) | {low, high}
        dims = {k: self.dims[k] for k in keep}
        covers = [(a, b) for a, b in self.covers if a in keep and b in keep]
        return GradedPoset(dims, covers, payload=self.payload, has_bottom=False)

    def is_graded_by_covers(self):
        """Every cover climbs exactly one dimension."""
        return all(self.dims[hi] == self.dims[lo] + 1 for lo, hi in self.covers)


@dataclass
class PolytopeReport:
    """Outcome of the abstract-polytope check: a certificate or a witness."""

    ok: bool
    rank: int | None = None
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def _flag_through(p, k):
    # Greedy maximal chain through k, as a witness for flag-length failures.
    chain = [k]
    while p.lower[chain[0]]:
        chain.insert(0, p.lower[chain[0]][0])
    while p.upper[chain[-1]]:
        chain.append(p.upper[chain[-1]][0])
    return tuple(chain)


def check_abstract_polytope(p):
    """Certify the four abstract-polytope axioms for a bottomed poset.

    Returns a PolytopeReport: on success ``rank`` is the verified rank, on
    failure ``axiom`` names the first broken axiom in the fixed order
    extremal, flag-length, diamond, strongly-connected, together with a
    witness.  Failure is a value, not an exception.
    """
    mins = p.minimal()
    maxs = p.maximal()
    if len(mins) != 1 or len(maxs) != 1:
        return PolytopeReport(False, axiom="extremal", witness=(tuple(mins), tuple(maxs)))
    bottom, top = mins[0], maxs[0]
    rank = p.dims[top]

    # Every maximal chain has length rank+1 exactly when each cover climbs
    # one dimension and no chain can stall before the extremes.
    for lo, hi in p.covers:
        if p.dims[hi] != p.dims[lo] + 1:
            return PolytopeReport(False, axiom="flag-length", witness=("cover", lo, hi))
    for k in p.dims:
        if (k != top and not p.upper[k]) or (k != bottom and not p.lower[k]):
            return PolytopeReport(False, axiom="flag-length", witness=("stalled", k, _flag_through(p, k)))

    # Diamond: rank-2 intervals have exactly two interior elements.
    for g in p.elements():
        covers_down = set(p.lower[g])
        for f in sorted(p.downset(g), key=repr):
            if p.dims[f] != p.dims[g] - 2:
                continue
            middles = [h for h in p.upper[f] if h in covers_down]
            if len(middles) != 2:
                return PolytopeReport(False, axiom="diamond", witness=(f, g, tuple(sorted(middles, key=repr))))

    # Strong connectivity: open intervals of height >= 3 are connected under
    # cover-adjacency read in the ambient poset.
    for g in p.elements():
        below_g = p.downset(g)
        for f in sorted(below_g, key=repr):
            if p.dims[g] - p.dims[f] < 3:
                continue
            inside = below_g & p.upset(f)
            if not inside:
                continue
            seen = set()
            stack = [next(iter(inside))]
            while stack:
                h = stack.pop()
                if h in seen:
                    continue
                seen.add(h)
                for nb in p.upper[h] + p.lower[h]:
                    if nb in inside and nb not in seen:
                        stack.append(nb)
            if seen != inside:
                stray = sorted(inside - seen, key=repr)[0]
                return PolytopeReport(False, axiom="strongly-connected", witness=(f, g, next(iter(seen)), stray))

    return PolytopeReport(True, rank=rank)


def is_simple(p):
    """True when every 0-face of the certified polytope meets exactly rank 1-faces."""
    report = check_abstract_polytope(p)
    if not report.ok:
        raise ValidationError("NotAPolytope", f"simplicity undefined: {report.axiom} fails")
    d = report.rank
    return all(len(p.upper[k]) == d for k, dim in p.dims.items() if dim == 0)


def is_order_isomorphism(p, q, mapping):
    """Check that ``mapping`` is a cover-preserving bijection p -> q."""
    if set(mapping) != set(p.dims) or set(mapping.values()) != set(q.dims):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    if len(p.covers) != len(q.covers):
        return False
    qcovers = set(q.covers)
    return all((mapping[a], mapping[b]) in qcovers for a, b in p.covers)


def _refine_colors(p):
    color = {k: (p.dims[k], len(p.upper[k]), len(p.lower[k])) for k in p.dims}
    while True:
        palette = {}
        nxt = {}
        for k in p.dims:
            sig = (
                color[k],
                tuple(sorted(color[u] for u in p.upper[k])),
                tuple(sorted(color[d] for d in p.lower[k])),
            )
            nxt[k] = palette.setdefault(sig, len(palette))
        if len(set(nxt.values())) == len(set(color.values())):
            return nxt
        color = nxt


def isomorphic(p, q):
    """Search for an order isomorphism p -> q; returns a mapping or None.

    Exact backtracking over cover-degree/dimension color classes; no
    heuristics, intended for the desk-scale posets built here.
    """
    if len(p) != len(q) or len(p.covers) != len(q.covers):
        return None
    if sorted(p.dims.values()) != sorted(q.dims.values()):
        return None
    pc = _refine_colors(p)
    qc = _refine_colors(q)

    # Refined colors are arbitrary integers per poset; classes are matched by
    # the invariant signature (dim, updeg, downdeg, class size).  That may
    # admit extra candidates but never loses one.
    def classes(colored, poset):
        groups = {}
        for k, c in colored.items():
            groups.setdefault(c, []).append(k)
        sigs = {}
        for c, members in groups.items():
            k = members[0]
            sigs[c] = (poset.dims[k], len(poset.upper[k]), len(poset.lower[k]), len(members))
        return groups, sigs

    pgroups, psigs = classes(pc, p)
    qgroups, qsigs = classes(qc, q)
    if sorted(psigs.values()) != sorted(qsigs.values()):
        return None

    # Stable class signatures are not a complete invariant, so pair classes
    # by signature and let the backtracking figure out the rest.
    sig_to_qclasses = {}
    for c, sig in qsigs.items():
        sig_to_qclasses.setdefault(sig, []).append(c)

    order = sorted(p.dims, key=lambda k: (len(pgroups[pc[k]]), psigs[pc[k]], repr(k)))
    qcov = set(q.covers)
    mapping = {}
    used = set()

    def candidates(k):
        out = []
        for c in sig_to_qclasses.get(psigs[pc[k]], []):
            out.extend(m for m in qgroups[c] if m not in used)
        return out

    def consistent(k, m):
        for u in p.upper[k]:
            if u in mapping and (m, mapping[u]) not in qcov:
                return False
        for d in p.lower[k]:
            if d in mapping and (mapping[d], m) not in qcov:
                return False
        return True

    def backtrack(i):
        if i == len(order):
            return True
        k = order[i]
        for m in candidates(k):
            if consistent(k, m):
                mapping[k] = m
                used.add(m)
                if backtrack(i + 1):
                    return True
                del mapping[k]
                used.remove(m)
        return False

    if not backtrack(0):
        return None
    assert is_order_isomorphism(p, q, mapping)
    return dict(mapping)


def _transitive_reduction_covers(elems, leq):
    covers = []
    for b in elems:
        below = [a for a in elems if a != b and leq(a, b)]
        for a in below:
            if not any(leq(a, c) and leq(c, b) for c in below if c != a):
                covers.append((a, b))
    return covers


def poset_product(factors):
    """Direct product; keys are tuples of factor keys, dimensions add."""
    elems = [()]
    for f in factors:
        elems = [t + (k,) for t in elems for k in f.elements()]
    dims = {}
    for t in elems:
        dims[t] = sum(f.dims[k] for f, k in zip(factors, t)) if t else 0

    def leq(a, b):
        return all(f.leq(x, y) for f, x, y in zip(factors, a, b))

    return GradedPoset(dims, _transitive_reduction_covers(elems, leq))


def fiber_product(factors, maps, base):
    """Fiber product of posets over ``base``.

    ``maps[i]`` sends each element of ``factors[i]`` to an element of
    ``base``; elements of the product are tuples (x_1, .., x_l, y) with every
    x_i over y, ordered componentwise.  The dimension of a tuple is
    d(y) + sum(d(x_i) - d(y)); with no factors the base itself is returned.
    """
    if len(factors) != len(maps):
        raise ValidationError("MapUndefined", "one map per factor is required")
    if not factors:
        return base
    for f, m in zip(factors, maps):
        for k in f.dims:
            if k not in m:
                raise ValidationError("MapUndefined", f"map misses element {k!r}")
            if m[k] not in base.dims:
                raise ValidationError("MapUndefined", f"map image {m[k]!r} is not in the base")

    fibers = {y: [] for y in base.dims}
    for f, m in zip(factors, maps):
        for y in fibers:
            fibers[y].append([k for k in f.elements() if m[k] == y])

    elems = []
    dims = {}
    for y in sorted(base.dims, key=repr):
        combos = [()]
        for part in fibers[y]:
            combos = [t + (x,) for t in combos for x in part]
        for t in combos:
            key = t + (y,)
            elems.append(key)
            dy = base.dims[y]
            dims[key] = dy + sum(f.dims[x] - dy for f, x in zip(factors, t))

    def leq(a, b):
        if not base.leq(a[-1], b[-1]):
            return False
        return all(f.leq(x, y) for f, x, y in zip(factors, a[:-1], b[:-1]))

    return GradedPoset(dims, _transitive_reduction_covers(elems, leq))
