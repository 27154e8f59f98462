"""Command-line interface: enumeration, certification, conversion, reports.

Every command prints a deterministic plain-text report, or the same data as
JSON under --json, and exits 0 exactly when all requested checks pass.
Enumeration size is guarded by --max-dim (default 4, overridable through the
TWOASSOC_MAX_DIM environment variable) and can be bypassed with --force.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bracketing, io, poset, rrt, structure, treepair, twobracketing
from .errors import BoundExceeded, FactorMismatch, ParseError, TwoAssocError, ValidationError

DEFAULT_MAX_DIM = 4


def _parse_weights(text):
    try:
        n = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError("WeightMismatch", f"cannot parse weight vector {text!r}")
    if not n or any(x < 0 for x in n) or not any(n):
        raise ValidationError("WeightMismatch", f"weight vector {n} must be nonnegative and nonzero")
    return n


def _max_dim(args):
    if args.max_dim is not None:
        return args.max_dim
    env = os.environ.get("TWOASSOC_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


def _guard(args, dim, label):
    limit = _max_dim(args)
    if dim > limit and not args.force:
        raise BoundExceeded(f"{label} has dimension {dim} > --max-dim {limit}; pass --force to proceed")


def _emit(args, report, lines):
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _fv_str(fv):
    return ",".join(str(x) for x in fv)


def cmd_enumerate(args):
    n = _parse_weights(args.n)
    _guard(args, sum(n) + len(n) - 3, f"W_{n}")
    W = treepair.enumerate_wn(n)
    fv = W.face_vector()
    model = args.model or "tree"
    if model == "bracket":
        keys = sorted(twobracketing.two_nu(p).key for p in W.payload.values())
        elements = [{"key": k} for k in keys]
    else:
        elements = [{"key": k, "dim": W.dims[k]} for k in W.elements()]
    report = {"n": list(n), "face_vector": list(fv), "total": len(W), "model": model, "elements": elements}
    lines = [f"W_{','.join(map(str, n))}: {len(W)} faces, face vector {_fv_str(fv)}"]
    lines += [f"  dim {e.get('dim', '?')}: {e['key']}" for e in elements] if args.verbose else []
    _emit(args, report, lines)
    return 0


def cmd_face_vector(args):
    n = _parse_weights(args.n)
    _guard(args, sum(n) + len(n) - 3, f"W_{n}")
    fv = treepair.enumerate_wn(n).face_vector()
    _emit(args, {"n": list(n), "face_vector": list(fv)}, [_fv_str(fv)])
    return 0


def cmd_verify(args):
    if args.r is not None:
        _guard(args, args.r - 2, f"K_{args.r}")
        P = rrt.enumerate_kr(args.r).adjoin_bottom()
        label, want = f"K_{args.r}", args.r - 2
    else:
        n = _parse_weights(args.n)
        _guard(args, sum(n) + len(n) - 3, f"W_{n}")
        P = treepair.enumerate_wn(n).adjoin_bottom()
        label, want = "W_" + ",".join(map(str, n)), sum(n) + len(n) - 3
    rep = poset.check_abstract_polytope(P)
    ok = rep.ok and rep.rank == want
    report = {
        "poset": label,
        "ok": ok,
        "rank": rep.rank,
        "expected_rank": want,
        "axiom": rep.axiom,
        "witness": repr(rep.witness) if rep.witness else None,
    }
    if rep.ok:
        lines = [f"{label}: abstract polytope certificate, rank {rep.rank} (expected {want})"]
    else:
        lines = [f"{label}: FAILED axiom {rep.axiom}, witness {rep.witness!r}"]
    _emit(args, report, lines)
    return 0 if ok else 1


def cmd_compare_appendix(args):
    rows = io.load_appendix_table()
    results = []
    ok = True
    for row in rows:
        P = treepair.enumerate_wn(row.n)
        fv = P.face_vector()
        simple = poset.is_simple(P.adjoin_bottom())
        match = fv == row.face_vector and simple == row.simple
        ok = ok and match
        results.append(
            {
                "n": list(row.n),
                "expected": list(row.face_vector),
                "computed": list(fv),
                "expected_simple": row.simple,
                "computed_simple": simple,
                "match": match,
            }
        )
    lines = []
    for res in results:
        tag = "OK " if res["match"] else "DIFF"
        lines.append(
            f"{tag} n={','.join(map(str, res['n']))}: face vector {_fv_str(res['computed'])}"
            f" vs {_fv_str(res['expected'])}, simple {res['computed_simple']} vs {res['expected_simple']}"
        )
    lines.append("all rows match" if ok else "MISMATCH")
    _emit(args, {"rows": results, "ok": ok}, lines)
    return 0 if ok else 1


def _detect_and_convert(text, target):
    obj = json.loads(text)
    if isinstance(obj, list):
        doc = "tree"
    elif "brackets" in obj:
        doc = "1bracketing"
    elif "bubble" in obj:
        doc = "tree-pair"
    elif "brackets2" in obj:
        doc = "2bracketing"
    else:
        raise ParseError("unrecognized document shape")
    if doc == "tree":
        tree = io.loads_tree(text)
        if target == "tree":
            return io.dumps_tree(tree)
        return io.dumps_1bracketing(bracketing.nu(tree))
    if doc == "1bracketing":
        b = io.loads_1bracketing(text)
        if target == "bracket":
            return io.dumps_1bracketing(b)
        return io.dumps_tree(bracketing.tau(b))
    if doc == "tree-pair":
        p = io.loads_tree_pair(text)
        if target == "tree":
            return io.dumps_tree_pair(p)
        return io.dumps_2bracketing(twobracketing.two_nu(p))
    b = io.loads_2bracketing(text)
    twobracketing.validate_2bracketing(b)
    if target == "bracket":
        return io.dumps_2bracketing(b)
    return io.dumps_tree_pair(twobracketing.two_tau(b))


def cmd_convert(args):
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    obj = json.loads(text)
    default_target = "bracket" if isinstance(obj, list) or "bubble" in obj else "tree"
    out = _detect_and_convert(text, args.model or default_target)
    print(out)
    return 0


def cmd_decompose(args):
    n = _parse_weights(args.n)
    _guard(args, sum(n) + len(n) - 3, f"W_{n}")
    W = treepair.enumerate_wn(n)
    if args.face not in W.payload:
        raise ValidationError("AnchorNotFound", f"face key {args.face!r} not found; keys come from `enumerate --json`")
    dec = structure.gamma2T(W.payload[args.face])
    report = {
        "n": list(n),
        "face": dec.anchor_key,
        "verified": dec.verified,
        "closure_size": len(dec.image),
        "unary_factors": [{"disk": list(p), "weights": list(w)} for p, w in dec.unary],
        "seam_groups": [
            {"vertex": list(rho), "base_arity": k, "members": [{"disk": list(p), "weights": list(w)} for p, w in members]}
            for rho, k, members in dec.groups
        ],
    }
    lines = [f"face {dec.anchor_key}", f"closure has {len(dec.image)} faces; decomposition verified: {dec.verified}"]
    for p, w in dec.unary:
        lines.append(f"  one-seam disk {p}: W_{','.join(map(str, w))}")
    for rho, k, members in dec.groups:
        inner = " x ".join("W_" + ",".join(map(str, w)) for _, w in members) or "(empty)"
        lines.append(f"  seam vertex {rho}: fiber product over K_{k} of {inner}")
    _emit(args, report, lines)
    return 0


def cmd_oracle_check(args):
    n = _parse_weights(args.n)
    bound = args.bound if args.bound is not None else int(os.environ.get("TWOASSOC_ORACLE_BOUND", "6"))
    O = twobracketing.oracle_poset(n, bound)
    W = treepair.enumerate_wn(n)
    pairs = {k: twobracketing.two_nu(p) for k, p in W.payload.items()}
    keys_bfs = {b.key for b in pairs.values()}
    same_sets = keys_bfs == set(O.dims)
    same_order = same_sets
    if same_sets:
        back = {b.key: k for k, b in pairs.items()}
        for a in O.dims:
            for b in O.dims:
                lhs = O.leq(a, b)
                rhs = W.leq(back[a], back[b])
                if lhs != rhs:
                    same_order = False
                    break
            if not same_order:
                break
    ok = same_sets and same_order
    report = {"n": list(n), "oracle": len(O), "bfs": len(W), "sets_match": same_sets, "orders_match": same_order}
    _emit(args, report, ["match" if ok else "MISMATCH: " + json.dumps(report, sort_keys=True)])
    return 0 if ok else 1


def cmd_export(args):
    if args.r is not None:
        _guard(args, args.r - 2, f"K_{args.r}")
        P = rrt.enumerate_kr(args.r)
    else:
        n = _parse_weights(args.n)
        _guard(args, sum(n) + len(n) - 3, f"W_{n}")
        P = treepair.enumerate_wn(n)
    if args.hatted:
        P = P.adjoin_bottom()
    text = io.export_dot(P) if args.format == "dot" else io.dumps_poset(P) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="twoassoc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_n=True, optional_r=False):
        if needs_n:
            if optional_r:
                g = p.add_mutually_exclusive_group(required=True)
                g.add_argument("--n", help="comma-separated weights, e.g. 2,0,0")
                g.add_argument("--r", type=int, help="leaf count for the K poset")
            else:
                p.add_argument("--n", required=True, help="comma-separated weights, e.g. 2,0,0")
        p.add_argument("--max-dim", type=int, default=None, help="refuse enumerations above this dimension (default 4)")
        p.add_argument("--force", action="store_true", help="ignore the dimension bound")
        p.add_argument("--json", action="store_true", help="machine-readable report")

    p = sub.add_parser("enumerate", help="enumerate W_n and print counts")
    common(p)
    p.add_argument("--model", choices=["tree", "bracket"], default=None)
    p.add_argument("--verbose", action="store_true", help="list element keys")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("face-vector", help="print the face vector of W_n")
    common(p)
    p.set_defaults(func=cmd_face_vector)

    p = sub.add_parser("verify", help="run the abstract polytope certificate")
    common(p, optional_r=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare-appendix", help="recompute all 20 reference rows and diff")
    common(p, needs_n=False)
    p.set_defaults(func=cmd_compare_appendix)

    p = sub.add_parser("convert", help="convert tree and bracket forms at both levels")
    common(p, needs_n=False)
    p.add_argument("--input", required=True, help="JSON file, or - for stdin")
    p.add_argument("--model", choices=["tree", "bracket"], default=None, help="target model")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("decompose", help="verified product decomposition of a face")
    common(p)
    p.add_argument("--face", required=True, help="canonical face key from `enumerate --json`")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("oracle-check", help="diff move enumeration against brute force")
    common(p)
    p.add_argument("--bound", type=int, default=None, help="oracle size bound on |n|+r (default 6)")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("export", help="export a face poset as DOT or JSON")
    common(p, optional_r=True)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--hatted", action="store_true", help="adjoin the least face first")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export)

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as err:
        print(f"refused: {err}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        if getattr(args, "json", False):
            print(json.dumps({"error": str(err), "code": getattr(err, "code", None)}, sort_keys=True))
        return 2
    except FactorMismatch as err:
        print(f"check failed: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
