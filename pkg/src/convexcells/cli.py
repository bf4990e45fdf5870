"""Command-line front end.

Set files are JSON: {"ambient_dim": n, "pieces": [[constraint, ...], ...]}
with constraint = {"coeffs": ["1", "-2/3", ...], "rel": "="|"<="|"<",
"rhs": "1/2"}.  All numbers are exact rational strings; no decimals are
accepted or ever printed.  Reports go to stdout as JSON with a stable field
order.

Exit codes: 0 ok, 2 not convex, 3 precondition violation, 4 parse error,
5 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import algebra as alg, cells as cs, classification as cl, constructions as cons
from . import polyhedron as ph
from .cells import CellSet, NotConvexError, ResourceLimitError
from .classification import Classification
from .linalg import AffineMap, Vec, format_rational, parse_rational
from .lp import EQ, LE, LT, DimensionMismatch, LinConstraint

EXIT_OK = 0
EXIT_NOT_CONVEX = 2
EXIT_PRECONDITION = 3
EXIT_PARSE = 4
EXIT_RESOURCE = 5


class ParseError(ValueError):
    pass


def _fmt_vec(v: Vec) -> list[str]:
    return [format_rational(x) for x in v]


def _fmt_constraint(c: LinConstraint) -> dict:
    return {"coeffs": _fmt_vec(c.coeffs), "rel": c.rel,
            "rhs": format_rational(c.rhs)}


def load_setfile(path: str, max_hyperplanes: int) -> CellSet:
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return parse_setfile(data, where=path, max_hyperplanes=max_hyperplanes)


def parse_setfile(data, where: str = "<input>",
                  max_hyperplanes: int = cs.DEFAULT_MAX_HYPERPLANES) -> CellSet:
    try:
        dim = int(data["ambient_dim"])
        if dim < 1:
            raise ParseError(f"{where}: ambient_dim must be at least 1")
        pieces_raw = data["pieces"]
        pieces = []
        for pr in pieces_raw:
            rows = []
            for con in pr:
                coeffs = [parse_rational(x) for x in con["coeffs"]]
                if len(coeffs) != dim:
                    raise ParseError(f"{where}: constraint arity {len(coeffs)} "
                                     f"in dimension {dim}")
                rel = con["rel"]
                if rel not in (EQ, LE, LT):
                    raise ParseError(f"{where}: bad relation {rel!r}")
                rows.append(LinConstraint(tuple(coeffs), rel,
                                          parse_rational(con["rhs"])))
            pieces.append(tuple(rows))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{where}: {exc}") from exc
    return cs.canonicalize(dim, pieces, max_hyperplanes)


def dump_setfile(s: CellSet) -> dict:
    pieces = []
    if not s.is_empty:
        for c in s.included_cells():
            pieces.append([_fmt_constraint(con) for con in c.constraints()])
    else:
        zero = ["0"] * s.dim
        pieces.append([{"coeffs": zero, "rel": EQ, "rhs": "1"}])
    return {"ambient_dim": s.dim, "pieces": pieces}


def _classification_payload(s: CellSet, c: Classification, check: bool) -> dict:
    out = {
        "class": int(c.tag),
        "class_name": c.tag.name.lower(),
        "predicates": {
            "closed": c.closed,
            "affine": c.affine,
            # undefined on the empty set (every predicate below needs points)
            "bounded_mod_subspace": None if s.is_empty else c.bounded_mod_subspace_ok,
            "dent": None if s.is_empty else c.dent is not None,
            "ray": None if s.is_empty else c.ray is not None,
        },
    }
    if isinstance(c.decomposition, cl.BoundedDecomposition):
        out["decomposition"] = {
            "subspace_basis": [_fmt_vec(v) for v in c.decomposition.basis],
            "section_radius_sq": format_rational(c.decomposition.radius_sq),
        }
    elif isinstance(c.decomposition, cl.NotDecomposable):
        d = {"reason": c.decomposition.reason}
        if c.decomposition.witness_point is not None:
            d["point"] = _fmt_vec(c.decomposition.witness_point)
            d["shift"] = _fmt_vec(c.decomposition.witness_shift)
        if c.decomposition.witness_direction is not None:
            d["direction"] = _fmt_vec(c.decomposition.witness_direction)
        out["decomposition"] = d
    if c.dent is not None:
        out["dent"] = {
            "point": _fmt_vec(c.dent.point),
            "lambda": format_rational(c.dent.lam),
            "inner": _fmt_vec(c.dent.inner),
            "closure_point": _fmt_vec(c.dent.closure_pt),
        }
    if c.ray is not None:
        out["ray"] = {
            "base": _fmt_vec(c.ray.base),
            "direction": _fmt_vec(c.ray.direction),
            "mode": c.ray.mode,
        }
    if check:
        checks = {}
        if c.dent is not None:
            checks["dent"] = c.dent.verify(s)
        if c.ray is not None:
            checks["ray"] = c.ray.verify(s)
        if isinstance(c.decomposition, cl.BoundedDecomposition):
            checks["decomposition"] = c.decomposition.verify(s)
        out["witness_checks"] = checks
    return out


def _pipeline_trace(node: alg.OpNode) -> dict:
    out = {"kind": node.kind, "dim": node.dim}
    if node.label:
        out["label"] = node.label
    if node.children:
        out["children"] = [_pipeline_trace(ch) for ch in node.children]
    return out


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2))


def _parse_map(matrix: str, offset: str | None) -> AffineMap:
    try:
        rows = [[parse_rational(x) for x in row.split(",")]
                for row in matrix.split(";")]
        if offset:
            off = [parse_rational(x) for x in offset.split(",")]
        else:
            off = [0] * len(rows)
        return AffineMap(rows, off)
    except ValueError as exc:
        raise ParseError(f"bad affine map: {exc}") from exc


def _parse_point(text: str) -> Vec:
    try:
        return tuple(parse_rational(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad point: {exc}") from exc


def cmd_classify(args) -> int:
    s = load_setfile(args.file, args.max_hyperplanes)
    c = cl.classify(s)
    _emit({"command": "classify", "input": args.file, "status": "OK",
           "result": _classification_payload(s, c, args.check_witness)})
    return EXIT_OK


def cmd_apply(args) -> int:
    sets = [load_setfile(p, args.max_hyperplanes) for p in args.files]
    nodes = [alg.source(s, p) for s, p in zip(sets, args.files)]
    op = args.op
    if op == "image":
        if len(nodes) != 1:
            raise ParseError("image expects exactly one input file")
        node = alg.image(nodes[0], _parse_map(args.matrix, args.offset))
    elif op == "preimage":
        if len(nodes) != 1:
            raise ParseError("preimage expects exactly one input file")
        node = alg.preimage(nodes[0], _parse_map(args.matrix, args.offset))
    elif op == "intersect":
        if len(nodes) < 2:
            raise ParseError("intersect expects at least two input files")
        node = alg.intersect_nodes(*nodes)
    elif op == "closure":
        if len(nodes) != 1:
            raise ParseError("closure expects exactly one input file")
        node = alg.closure_node(nodes[0])
    elif op == "dlimit":
        if len(nodes) != 1:
            raise ParseError("dlimit expects exactly one input file")
        if not args.direction:
            raise ParseError("dlimit needs --direction")
        node = alg.dlimit_node(nodes[0], _parse_point(args.direction))
    else:
        raise ParseError(f"unknown operation {op!r}")
    report = alg.check_monotonicity(node, args.max_hyperplanes)
    result = alg.evaluate(node, args.max_hyperplanes)
    out = {
        "command": "apply", "op": op, "inputs": list(args.files),
        "status": "OK",
        "result": {
            "input_classes": [int(cl.classify(s).tag) for s in sets],
            "output_class": int(cl.classify(result).tag),
            "monotonicity_ok": not report.flagged,
        },
    }
    if args.out:
        with open(args.out, "w") as f:
            json.dump(dump_setfile(result), f, indent=2)
            f.write("\n")
        out["result"]["written"] = args.out
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    s = load_setfile(args.file, args.max_hyperplanes)
    name = args.name
    if name == "ray":
        rep = cons.construct_ray(s)
    elif name == "open-interval":
        rep = cons.construct_open_interval(s)
    elif name == "compact-interval":
        rep = cons.construct_compact_interval(s)
    elif name == "pointed-rectangle":
        rep = cons.construct_pointed_rectangle(s)
    elif name == "from-ray":
        rep = cons.define_from_ray(s, args.max_hyperplanes)
    elif name == "closed-from-ray":
        rep = cons.define_closed_from_ray(s)
    elif name == "pointed-stripe-pointwise":
        grid = cons.GridSpec(density=args.density, window=parse_rational("2"),
                             truncation=args.truncation)
        prep = cons.verify_pointed_stripe_construction(s, grid)
        _emit({"command": "verify-construction", "name": name,
               "input": args.file, "status": "OK",
               "result": {
                   "grid_points": prep.total,
                   "agreements": prep.agreements,
                   "all_agree": prep.all_agree,
                   "truncation_consistent": prep.truncation_matches_exact,
                   "disagreements": [
                       {"point": _fmt_vec(p), "formula": got, "target": want}
                       for p, got, want in prep.disagreements],
               }})
        return EXIT_OK
    else:
        raise ParseError(f"unknown construction {name!r}")
    _emit({"command": "verify-construction", "name": name, "input": args.file,
           "status": "OK",
           "result": {"verified": rep.verified,
                      "pipeline": _pipeline_trace(rep.pipeline)}})
    return EXIT_OK


def cmd_equal(args) -> int:
    a = load_setfile(args.file_a, args.max_hyperplanes)
    b = load_setfile(args.file_b, args.max_hyperplanes)
    only_a = cs.separating_point(a, b)
    only_b = cs.separating_point(b, a)
    result = {"equal": only_a is None and only_b is None}
    if only_a is not None:
        result["only_in_first"] = _fmt_vec(only_a)
    if only_b is not None:
        result["only_in_second"] = _fmt_vec(only_b)
    _emit({"command": "equal", "inputs": [args.file_a, args.file_b],
           "status": "OK", "result": result})
    return EXIT_OK


def cmd_member(args) -> int:
    s = load_setfile(args.file, args.max_hyperplanes)
    x = _parse_point(args.point)
    if len(x) != s.dim:
        raise ParseError("point dimension does not match the set")
    _emit({"command": "member", "input": args.file, "status": "OK",
           "result": {"point": _fmt_vec(x), "member": s.membership(x)}})
    return EXIT_OK


def cmd_sample(args) -> int:
    s = load_setfile(args.file, args.max_hyperplanes)
    pts = cs.sample_points(s, args.density)
    _emit({"command": "sample", "input": args.file, "status": "OK",
           "result": {"density": args.density,
                      "points": [_fmt_vec(p) for p in pts]}})
    return EXIT_OK


def cmd_polycheck(args) -> int:
    s = load_setfile(args.file, args.max_hyperplanes)
    weights = [parse_rational(x) for x in args.lambdas.split(",")]
    res = cons.polymorphism_check(s, weights)
    payload = {"weights": [format_rational(w) for w in res.weights],
               "preserved": res.preserved}
    if not res.preserved:
        payload["witness"] = [_fmt_vec(p) for p in res.witness]
        payload["combination"] = _fmt_vec(res.combination)
    _emit({"command": "polycheck", "input": args.file, "status": "OK",
           "result": payload})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="convexcells",
        description="exact classification and definability algebra for "
                    "convex semilinear sets")
    p.add_argument("--max-hyperplanes", type=int,
                   default=cs.DEFAULT_MAX_HYPERPLANES,
                   help="cap on arrangement hyperplanes (resource guard)")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("classify", help="decide the class of a set")
    c.add_argument("file")
    c.add_argument("--check-witness", action="store_true")
    c.set_defaults(func=cmd_classify)

    a = sub.add_parser("apply", help="apply an algebra operation")
    a.add_argument("op", choices=["image", "preimage", "intersect",
                                  "closure", "dlimit"])
    a.add_argument("files", nargs="+")
    a.add_argument("--matrix", help="rows ; separated, entries , separated")
    a.add_argument("--offset")
    a.add_argument("--direction")
    a.add_argument("--out")
    a.set_defaults(func=cmd_apply)

    v = sub.add_parser("verify-construction", help="run a named construction")
    v.add_argument("name", choices=["ray", "open-interval", "compact-interval",
                                    "pointed-rectangle",
                                    "pointed-stripe-pointwise", "from-ray",
                                    "closed-from-ray"])
    v.add_argument("file")
    v.add_argument("--density", type=int, default=4)
    v.add_argument("--truncation", type=int, default=64)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("equal", help="semantic set equality")
    e.add_argument("file_a")
    e.add_argument("file_b")
    e.set_defaults(func=cmd_equal)

    m = sub.add_parser("member", help="exact membership of a point")
    m.add_argument("file")
    m.add_argument("--point", required=True)
    m.set_defaults(func=cmd_member)

    sp = sub.add_parser("sample", help="rational sample points of the set")
    sp.add_argument("file")
    sp.add_argument("--density", type=int, default=4)
    sp.set_defaults(func=cmd_sample)

    pc = sub.add_parser("polycheck", help="affine combination preservation")
    pc.add_argument("file")
    pc.add_argument("--lambdas", required=True)
    pc.set_defaults(func=cmd_polycheck)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotConvexError as exc:
        x, y, mid = exc.witness
        _emit({"command": args.verb, "status": "NOT_CONVEX",
               "witness": {"x": _fmt_vec(x), "y": _fmt_vec(y),
                           "midpoint": _fmt_vec(mid)}})
        return EXIT_NOT_CONVEX
    except (cons.PreconditionError, ph.EmptyPolyhedronError) as exc:
        _emit({"command": args.verb, "status": "ERROR",
               "error": {"kind": "precondition", "message": str(exc)}})
        return EXIT_PRECONDITION
    except (ParseError, DimensionMismatch) as exc:
        _emit({"command": args.verb, "status": "ERROR",
               "error": {"kind": "parse", "message": str(exc)}})
        return EXIT_PARSE
    except ResourceLimitError as exc:
        _emit({"command": args.verb, "status": "ERROR",
               "error": {"kind": "resource", "message": str(exc)}})
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
