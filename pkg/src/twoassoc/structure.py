"""Structure maps between the face posets: projection, avatars, decompositions.

The forgetful map sends a tree-pair to its seam tree (a 2-bracketing to its
1-bracketing).  Every closed face of W_n decomposes as a product of smaller
W posets, one per one-seam disk, times one fiber product per interior seam
vertex of fiber W posets over the K poset of that vertex's arity; the
decomposition here is constructed and then verified element by element
against the enumerated poset, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import bracketing, poset, rrt, treepair, twobracketing
from .errors import FactorMismatch, ValidationError
from .poset import GradedPoset
from .rrt import subtree
from .treepair import C2, MARK, TreePair
from .twobracketing import TwoBracketing


def forgetful_pi(x):
    """Project to the seam level: tree-pairs to trees, 2- to 1-bracketings."""
    if isinstance(x, TreePair):
        return x.seam
    if isinstance(x, TwoBracketing):
        return bracketing.OneBracketing(x.r, x.brackets1)
    raise ValidationError("WeightMismatch", f"no projection for {type(x).__name__}")


@lru_cache(maxsize=None)
def _nu_of(pair: TreePair) -> TwoBracketing:
    return twobracketing.two_nu(pair)


def pair_leq(fine: TreePair, coarse: TreePair) -> bool:
    """Order test without enumeration, through the bracket model."""
    return twobracketing.leq(_nu_of(fine), _nu_of(coarse))


@lru_cache(maxsize=None)
def _carrier_brackets(pair: TreePair):
    return {
        p: twobracketing._mark_rows(pair, p)
        for p in sorted(pair.kind)
        if pair.kind[p] in (C2, MARK)
    }


def avatar(coarse: TreePair, fine: TreePair, vertex):
    """Locate a vertex of the coarser pair inside a finer one.

    ``vertex`` is ("seam", path) for seam-tree vertices, matched by leaf
    span, or ("bubble", path) for disks and marks, matched by their
    2-bracket.  Raises NotBelow unless fine <= coarse; a missing avatar on
    valid inputs would be a bug and raises NoAvatar.
    """
    kind, path = vertex
    if not pair_leq(fine, coarse):
        raise ValidationError("NotBelow", f"{fine!r} is not below {coarse!r}")
    if kind == "seam":
        span = rrt.leaf_spans(coarse.seam)[tuple(path)]
        for q, sp in sorted(rrt.leaf_spans(fine.seam).items()):
            if sp == span:
                return q
        raise ValidationError("NoAvatar", f"no seam vertex with span {span}", witness=vertex)
    if kind == "bubble":
        target = _carrier_brackets(coarse)[tuple(path)]
        for q, bk in sorted(_carrier_brackets(fine).items()):
            if bk == target:
                return q
        raise ValidationError("NoAvatar", f"no carrier of 2-bracket {target}", witness=vertex)
    raise ValidationError("AnchorNotFound", f"unknown vertex kind {kind!r}")


def _cut(tree, root_path, boundary):
    """Copy the subtree at root_path, truncating the boundary vertices to leaves."""
    boundary = set(boundary)

    def copy(path):
        if path in boundary:
            return ()
        node = subtree(tree, path)
        return tuple(copy(path + (i,)) for i in range(len(node)))

    return copy(tuple(root_path))


def extract_subpair(coarse: TreePair, fine: TreePair, anchor):
    """Cut the portion of a finer pair bounded by a coarse vertex's avatars.

    anchor ("disk", path) with a one-seam disk of ``coarse``: the region
    between its avatar and the avatars of its grandchildren is a tree-pair
    over a single column whose weight is the seam's arity.

    anchor ("seam", path) with an interior seam-tree vertex: returns
    (base, pairs) where base is the seam subtree between the vertex's
    avatar and its children's avatars, and pairs are the cut tree-pairs of
    the multi-seam disks over that vertex, all fibered over base.
    """
    kind, path = anchor
    path = tuple(path)
    if kind == "disk":
        if path not in coarse.kind or coarse.kind[path] != C2 or len(subtree(coarse.bubble, path)) != 1:
            raise ValidationError("AnchorNotFound", f"{path} is not a one-seam disk", witness=anchor)
        beta = path + (0,)
        grand = [beta + (i,) for i in range(len(subtree(coarse.bubble, beta)))]
        root = avatar(coarse, fine, ("bubble", path))
        cuts = [avatar(coarse, fine, ("bubble", g)) for g in grand]
        return TreePair((len(grand),), _cut(fine.bubble, root, cuts))
    if kind == "seam":
        if path not in set(rrt.interior_paths(coarse.seam)):
            raise ValidationError("AnchorNotFound", f"{path} is not an interior seam vertex", witness=anchor)
        k = len(subtree(coarse.seam, path))
        rho = avatar(coarse, fine, ("seam", path))
        sigma = [avatar(coarse, fine, ("seam", path + (i,))) for i in range(k)]
        base = _cut(fine.seam, rho, sigma)
        pairs = []
        for alpha in coarse.multi_seam_disks():
            if coarse.coherence[alpha] != path:
                continue
            seams = subtree(coarse.bubble, alpha)
            weights = tuple(len(s) for s in seams)
            grand = [alpha + (i, j) for i, s in enumerate(seams) for j in range(len(s))]
            root = avatar(coarse, fine, ("bubble", alpha))
            cuts = [avatar(coarse, fine, ("bubble", g)) for g in grand]
            pairs.append(TreePair(weights, _cut(fine.bubble, root, cuts), seam=base))
        return base, tuple(pairs)
    raise ValidationError("AnchorNotFound", f"unknown anchor kind {kind!r}")


def graft(anchor: TreePair, disk_factors, seam_factors) -> TreePair:
    """Substitute a factor pair at every disk and a tree at every interior seam vertex.

    ``disk_factors`` maps each disk path of the anchor to a tree-pair whose
    marks stand for the disk's grandchildren: for a one-seam disk a pair of
    weight (k), for a multi-seam disk a pair of weight (arity of seam 1, ..).
    ``seam_factors`` maps each interior seam-tree vertex to a tree with
    matching arity.  The seam trees of the factors over one vertex must
    agree with its seam factor; validation of the grafted pair enforces it.
    """
    if anchor.bubble == ():
        return anchor
    new_seam = rrt.gamma(anchor.seam, seam_factors)

    def build(c2_path):
        factor = disk_factors[c2_path]
        seams = subtree(anchor.bubble, c2_path)
        slots = {}
        for i, seam in enumerate(seams, 1):
            for j in range(len(seam)):
                slots[(i, j + 1)] = c2_path + (i - 1, j)
        def sub(fpath):
            if factor.kind[fpath] == MARK:
                gpath = slots[factor.marks[fpath]]
                if anchor.kind[gpath] == MARK:
                    return ()
                return build(gpath)
            node = subtree(factor.bubble, fpath)
            return tuple(sub(fpath + (i,)) for i in range(len(node)))
        return sub(())

    return TreePair(anchor.n, build(()), seam=new_seam)


@dataclass
class Decomposition:
    """A verified product decomposition of the closed faces below an anchor."""

    anchor_key: str
    n: tuple
    unary: tuple       # (disk path, weight vector) per one-seam disk
    groups: tuple      # (seam path, base arity, ((disk path, weights), ...)) per interior vertex
    domain: GradedPoset
    image: dict        # domain key -> face key in W_n
    verified: bool


def gamma2T(anchor: TreePair) -> Decomposition:
    """Build and verify the decomposition of cl(anchor) inside W_n.

    The domain is the product over one-seam disks of W_(arity) with, for
    each interior seam vertex, the fiber product over K_(arity) of the W
    posets of the multi-seam disks above it.  The map substitutes factors
    into the anchor; bijectivity onto the closed faces below the anchor,
    order preservation both ways and the dimension bookkeeping are all
    checked, and any discrepancy raises FactorMismatch.
    """
    W = treepair.enumerate_wn(anchor.n)
    if anchor.key not in W.dims:
        raise ValidationError("AnchorNotFound", f"{anchor!r} is not a face of W_{anchor.n}")

    unary = tuple((p, (len(subtree(anchor.bubble, p)[0]),)) for p in anchor.one_seam_disks())
    groups = []
    for rho in rrt.interior_paths(anchor.seam):
        members = []
        for alpha in anchor.multi_seam_disks():
            if anchor.coherence[alpha] == rho:
                members.append((alpha, tuple(len(s) for s in subtree(anchor.bubble, alpha))))
        # A vertex of a fully collided bare region has no disks over it; its
        # factor is the empty fiber product, the base poset itself.
        groups.append((rho, len(subtree(anchor.seam, rho)), tuple(members)))
    groups = tuple(groups)

    factor_posets = []
    for _, weights in unary:
        factor_posets.append(treepair.enumerate_wn(weights))
    for _, arity, members in groups:
        base = rrt.enumerate_kr(arity)
        facs = [treepair.enumerate_wn(w) for _, w in members]
        maps = [{k: rrt.serialize(P.payload[k].seam) for k in P.dims} for P in facs]
        factor_posets.append(poset.fiber_product(facs, maps, base))
    domain = poset.poset_product(factor_posets)

    def forward(element):
        disk_factors = {}
        seam_factors = {}
        idx = 0
        for (p, weights) in unary:
            disk_factors[p] = treepair.enumerate_wn(weights).payload[element[idx]]
            idx += 1
        for (rho, arity, members) in groups:
            fib = element[idx]
            idx += 1
            if not members:
                seam_factors[rho] = rrt.deserialize(fib)
                continue
            xs, y = fib[:-1], fib[-1]
            seam_factors[rho] = rrt.deserialize(y)
            for (p, weights), xkey in zip(members, xs):
                disk_factors[p] = treepair.enumerate_wn(weights).payload[xkey]
        return graft(anchor, disk_factors, seam_factors)

    image = {}
    for element in domain.elements():
        face = forward(element)
        if face.key not in W.dims:
            raise FactorMismatch(f"grafted face {face.key} is not in W_{anchor.n}", witness=element)
        if face.key in image.values():
            raise FactorMismatch("graft is not injective", witness=element)
        if domain.dims[element] != W.dims[face.key]:
            raise FactorMismatch(
                f"dimension mismatch: domain says {domain.dims[element]}, face has {W.dims[face.key]}",
                witness=element,
            )
        image[element] = face.key

    closure = {anchor.key} | set(W.downset(anchor.key))
    if set(image.values()) != closure:
        raise FactorMismatch(
            f"image has {len(image)} faces, closure of the anchor has {len(closure)}", witness=anchor.key
        )
    elements = domain.elements()
    for a in elements:
        for b in elements:
            if domain.leq(a, b) != W.leq(image[a], image[b]):
                raise FactorMismatch("order not preserved", witness=(a, b))
    return Decomposition(anchor.key, anchor.n, unary, groups, domain, image, True)


def gamma_decomposition(tree):
    """The analogous verified decomposition of cl(tree) inside K_r.

    Domain: the product of K_(arity) over interior vertices; map: the
    substitution of component trees.  Returns (domain, image) after the
    same bijectivity and order checks as gamma2T.
    """
    r = rrt.leaf_count(tree)
    K = rrt.enumerate_kr(r)
    key = rrt.serialize(tree)
    if key not in K.dims:
        raise ValidationError("AnchorNotFound", f"{key} is not a face of K_{r}")
    anchors = rrt.interior_paths(tree)
    factor_posets = [rrt.enumerate_kr(len(subtree(tree, p))) for p in anchors]
    domain = poset.poset_product(factor_posets)

    image = {}
    for element in domain.elements():
        components = {p: rrt.enumerate_kr(len(subtree(tree, p))).payload[k] for p, k in zip(anchors, element)}
        face = rrt.gamma(tree, components)
        fkey = rrt.serialize(face)
        if fkey not in K.dims or fkey in image.values():
            raise FactorMismatch(f"substitution failed at {element}", witness=element)
        if domain.dims[element] != K.dims[fkey]:
            raise FactorMismatch("dimension mismatch in substitution", witness=element)
        image[element] = fkey

    closure = {key} | set(K.downset(key))
    if set(image.values()) != closure:
        raise FactorMismatch("substitution does not fill the closure", witness=key)
    elements = domain.elements()
    for a in elements:
        for b in elements:
            if domain.leq(a, b) != K.leq(image[a], image[b]):
                raise FactorMismatch("order not preserved by substitution", witness=(a, b))
    return domain, image


@dataclass
class ReversalCheck:
    n: tuple
    reversed_n: tuple
    mapping: dict
    ok: bool


def reverse_weights(n) -> ReversalCheck:
    """The mirror map W_n -> W_reversed(n), verified as an order isomorphism."""
    n = tuple(n)
    rev = tuple(reversed(n))
    W = treepair.enumerate_wn(n)
    R = treepair.enumerate_wn(rev)
    mapping = {k: treepair.mirror_pair(p).key for k, p in W.payload.items()}
    ok = poset.is_order_isomorphism(W, R, mapping)
    return ReversalCheck(n, rev, mapping, ok)


def collapse_check(n: int) -> bool:
    """Verify the one-column specialization W_(n) = K_n as posets."""
    W = treepair.enumerate_wn((n,))
    K = rrt.enumerate_kr(n)
    mapping = {k: rrt.serialize(treepair.collapse_to_kn(p)) for k, p in W.payload.items()}
    back = {k: treepair.inflate_from_kn(K.payload[m]).key for k, m in mapping.items()}
    return poset.is_order_isomorphism(W, K, mapping) and all(back[k] == k for k in mapping)
