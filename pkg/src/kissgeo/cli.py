"""Command-line interface.

Subcommands: verify (certificate for a packing), curve (boundary curve
plus optional SVG figure), search (stochastic maximizer), and mincurve
(shortest sparse-centered curve with separated endpoints).

Exit codes: 0 success, 1 IO/parse error, 2 invalid input, 3 a
theorem-violating finding (with a counterexample bundle written).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import pipeline as certify_mod
from . import curves, delaunay, io, packing, search
from .curves import CentersInvalid, CurveError, InequalityViolation
from .packing import PackingError

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_FINDING = 3


def _load_packing(path: str):
    try:
        doc = io.load_json(path)
        return io.doc_to_packing(doc)
    except (OSError, json.JSONDecodeError, io.DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc


def _write_counterexample(path_in: str, p, exc) -> str:
    out = os.path.abspath(
        os.path.splitext(os.path.basename(path_in))[0] + ".counterexample.json"
    )
    io.save_json(
        {
            "format_version": io.FORMAT_VERSION,
            "finding": str(exc),
            "packing": io.packing_to_doc(p),
        },
        out,
    )
    return out


def cmd_verify(args) -> int:
    p = _load_packing(args.input)
    try:
        report = certify_mod.certify(p, args.n)
    except InequalityViolation as exc:
        bundle = _write_counterexample(args.input, p, exc)
        print(f"finding: {exc}\ncounterexample bundle: {bundle}", file=sys.stderr)
        return EXIT_FINDING
    except (PackingError, CurveError, delaunay.DelaunayError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps(io.report_to_doc(report), indent=2, sort_keys=True))
    else:
        print(io.text_report(report), end="")
    return EXIT_OK


def cmd_curve(args) -> int:
    p = _load_packing(args.input)
    try:
        report = certify_mod.certify(p, args.n)
    except InequalityViolation as exc:
        bundle = _write_counterexample(args.input, p, exc)
        print(f"finding: {exc}\ncounterexample bundle: {bundle}", file=sys.stderr)
        return EXIT_FINDING
    except (PackingError, CurveError, delaunay.DelaunayError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if report.gamma is None:
        print("no curve: fallback bound path (fewer than two 2-disks)", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        io.save_json(io.curve_to_doc(report.gamma), args.out)
        print(f"curve: {args.out}")
    if args.svg:
        io.render_svg(report, args.svg)
        print(f"figure: {args.svg}")
    if not args.out and not args.svg:
        print(json.dumps(io.curve_to_doc(report.gamma), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_search(args) -> int:
    init = certify_mod.hex_packing(args.n) if args.init_hex else None
    state = search.optimize(
        args.n, args.budget, args.seed, restarts=args.restarts, init=init
    )
    doc = io.packing_to_doc(
        state.best,
        metadata={
            "best_count": str(state.best_count),
            "trajectory": ";".join(f"{i}:{c}" for i, c in state.trajectory),
        },
    )
    if args.out:
        io.save_json(doc, args.out)
        print(f"best: {state.best_count} disks -> {args.out}")
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_mincurve(args) -> int:
    try:
        doc = io.load_json(args.centers)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    pts = doc["disks"] if isinstance(doc, dict) else doc
    try:
        length, witness = curves.min_curve_search(
            np.array(pts, dtype=float), args.gap, max_arcs=args.max_arcs
        )
        curves.validate_curve(witness)
    except (CentersInvalid, CurveError, PackingError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"minimal length: {length:.9f} ({length / math.pi:.9f} pi)")
    if args.out:
        io.save_json(io.curve_to_doc(witness), args.out)
        print(f"witness: {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kissgeo",
        description="Certify, draw, and search disk packings of bounded kissing radius.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="certify a packing against the count bound")
    v.add_argument("input", help="packing JSON document")
    v.add_argument("--n", type=int, default=3, help="claimed kissing radius")
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report")
    fmt.add_argument("--text", action="store_true", help="text report (default)")
    v.add_argument("--tolerance", type=float, help="metric tolerance override")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("curve", help="construct the boundary curve and figure")
    c.add_argument("input")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--out", help="curve JSON output path")
    c.add_argument("--svg", help="SVG figure output path")
    c.add_argument("--tolerance", type=float)
    c.set_defaults(func=cmd_curve)

    s = sub.add_parser("search", help="stochastic search for large packings")
    s.add_argument("--n", type=int, default=3, choices=[1, 2, 3, 4])
    s.add_argument("--budget", type=int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--init-hex", action="store_true", help="seed from the lattice")
    s.add_argument("--out", help="best packing JSON output path")
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("mincurve", help="shortest admissible curve search")
    m.add_argument("--centers", required=True, help="JSON centers file")
    m.add_argument("--gap", type=float, default=1.0, help="minimal endpoint distance")
    m.add_argument("--max-arcs", type=int, default=4)
    m.add_argument("--out", help="witness curve JSON output path")
    m.set_defaults(func=cmd_mincurve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tolerance", None):
        os.environ["KISSGEO_TOLERANCE"] = repr(args.tolerance)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
