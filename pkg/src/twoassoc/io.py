"""Stable JSON wire formats, DOT export, and the bundled reference table.

Serialization is canonical: equal values produce byte-identical output
(sorted arrays, fixed separators).  The reference face-vector table ships as
a data file guarded by a checksum so the acceptance targets cannot drift
silently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from . import bracketing, rrt, treepair, twobracketing
from .errors import ParseError, TwoAssocError, ValidationError
from .poset import GradedPoset
from .treepair import C2, MARK, SEAM, TreePair
from .twobracketing import TwoBracket, TwoBracketing

_TABLE_FILE = "face_vectors.json"
_TABLE_SHA256 = "7bca9d7d5cad9423c28486a61c221d7599ceb2c58e7c4b88d36f0d84f7c11a77"


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, line=err.lineno, col=err.colno) from err


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


# -- trees and 1-bracketings -------------------------------------------------

def dumps_tree(tree) -> str:
    """Nested arrays, a leaf being []; this is the cross-module equality key."""
    return rrt.serialize(tree)


def loads_tree(text):
    tree = rrt._as_tuples(_loads(text))
    if not rrt.is_stable(tree):
        raise ParseError("tree is not stable")
    return tree


def dumps_1bracketing(b: bracketing.OneBracketing) -> str:
    return _dump({"r": b.r, "brackets": [list(s) for s in b.brackets]})


def loads_1bracketing(text) -> bracketing.OneBracketing:
    obj = _loads(text)
    try:
        return bracketing.from_spans(obj["r"], [tuple(s) for s in obj["brackets"]])
    except (KeyError, TypeError) as err:
        raise ParseError(f"bad 1-bracketing document: {err}") from err


# -- tree-pairs ----------------------------------------------------------------

def _bubble_tagged(bubble):
    def enc(node, kind):
        children = []
        for c in node:
            if kind == C2:
                children.append(enc(c, SEAM))
            else:
                children.append(enc(c, MARK if c == () else C2))
        return {"kind": kind, "children": children}

    return enc(bubble, MARK if bubble == () else C2)


def dumps_tree_pair(p: TreePair) -> str:
    """Weight and tagged bubble, plus the seam tree and structure map.

    The seam tree is derived data except over fully collided bare columns,
    so the loader consumes it when present and it is always emitted.
    """
    return _dump(
        {
            "n": list(p.n),
            "bubble": _bubble_tagged(p.bubble),
            "seam": json.loads(rrt.serialize(p.seam)),
            "coherence": {",".join(map(str, k)): list(v) for k, v in sorted(p.coherence.items())},
        }
    )


def loads_tree_pair(text) -> TreePair:
    obj = _loads(text)
    try:
        bubble = treepair.bubble_from_tagged(obj["bubble"])
        seam = rrt._as_tuples(obj["seam"]) if obj.get("seam") is not None else None
        return TreePair(obj["n"], bubble, seam=seam)
    except KeyError as err:
        raise ParseError(f"bad tree-pair document: missing {err}") from err


# -- 2-bracketings -------------------------------------------------------------

def dumps_2bracketing(b: TwoBracketing) -> str:
    """Spans, row runs per covered column (null = empty), orders by index.

    Order keys are "lo,hi" width strings; pairs index into the sorted
    brackets2 array.  Marks are indexed from 1 upward along each seam.
    """
    by2 = sorted(b.brackets2, key=TwoBracket.sort_key)
    idx = {bk: i for i, bk in enumerate(by2)}
    return _dump(
        {
            "n": list(b.n),
            "brackets1": [list(s) for s in b.brackets1],
            "brackets2": [
                {"B": [bk.lo, bk.hi], "rows": {str(i): list(bk.row(i)) if bk.row(i) else None for i in range(bk.lo, bk.hi + 1)}}
                for bk in by2
            ],
            "orders": {
                f"{w[0]},{w[1]}": sorted([idx[a], idx[b]] for a, b in pairs)
                for w, pairs in sorted(b.orders.items())
            },
        }
    )


def loads_2bracketing(text) -> TwoBracketing:
    obj = _loads(text)
    try:
        n = tuple(obj["n"])
        spans = [tuple(s) for s in obj["brackets1"]]
        by2 = []
        for ent in obj["brackets2"]:
            lo, hi = ent["B"]
            rows = [ent["rows"][str(i)] for i in range(lo, hi + 1)]
            by2.append(twobracketing.make_bracket(lo, hi, rows))
        orders = {}
        for wkey, pairs in obj.get("orders", {}).items():
            lo, hi = (int(x) for x in wkey.split(","))
            orders[(lo, hi)] = {(by2[a], by2[b]) for a, b in pairs}
        return TwoBracketing(n, spans, by2, orders)
    except (KeyError, TypeError, IndexError) as err:
        raise ParseError(f"bad 2-bracketing document: {err}") from err


# -- posets ---------------------------------------------------------------------

def dumps_poset(p: GradedPoset) -> str:
    return _dump(
        {
            "elements": [{"key": str(k), "dim": p.dims[k]} for k in p.elements()],
            "covers": sorted([str(a), str(b)] for a, b in p.covers),
        }
    )


def loads_poset(text) -> GradedPoset:
    obj = _loads(text)
    try:
        dims = {e["key"]: e["dim"] for e in obj["elements"]}
        return GradedPoset(dims, [tuple(c) for c in obj["covers"]])
    except (KeyError, TypeError) as err:
        raise ParseError(f"bad poset document: {err}") from err


def export_dot(p: GradedPoset, name="poset") -> str:
    """Hasse diagram in DOT, one rank layer per dimension, edges upward."""
    def q(key):
        return '"' + str(key).replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    by_dim = {}
    for k in p.elements():
        by_dim.setdefault(p.dims[k], []).append(k)
    for d in sorted(by_dim):
        row = "; ".join(q(k) for k in by_dim[d])
        lines.append(f"  {{ rank=same; {row}; }}")
    for a, b in p.covers:
        lines.append(f"  {q(a)} -> {q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- bundled reference data -------------------------------------------------------

@dataclass(frozen=True)
class AppendixRow:
    n: tuple
    face_vector: tuple
    simple: bool


def load_appendix_table():
    """The twenty reference rows: weight, face vector, simplicity flag.

    The file's checksum is pinned; a mismatch raises CorruptReferenceData
    rather than silently comparing against edited targets.
    """
    data = resources.files("twoassoc").joinpath("data").joinpath(_TABLE_FILE).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != _TABLE_SHA256:
        raise ValidationError("CorruptReferenceData", f"reference table checksum {digest} != {_TABLE_SHA256}")
    rows = []
    for ent in json.loads(data):
        row = AppendixRow(tuple(ent["n"]), tuple(ent["face_vector"]), bool(ent["simple"]))
        if len(row.face_vector) != sum(row.n) + len(row.n) - 2 or row.face_vector[-1] != 1:
            raise ValidationError("CorruptReferenceData", f"malformed row {row}")
        rows.append(row)
    if len(rows) != 20:
        raise ValidationError("CorruptReferenceData", f"expected 20 rows, found {len(rows)}")
    return rows
