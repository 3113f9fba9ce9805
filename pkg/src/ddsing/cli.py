"""Command line interface.

Subcommands: ``analyze`` (verdict report, optional certificates and
figures), ``gen`` (instance generators), ``oracle`` (brute-force rank and
determinant).  Exit codes: 0 nonsingular, 3 singular, 4 not diagonally
dominant, 1 usage or parse error.  Reports go to stdout, diagnostics to
stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DdsingError
from .exact import analyze_exact
from .matio import (
    SCHEMA,
    matrix_to_dict,
    parse_matrix,
    parse_weights,
    report_json,
    report_text,
    sniff_format,
    _pair,
    _vector,
)
from .matrix import Tolerances
from .oracle import FIXTURE_KINDS, gen_fixture, gen_singular_instance, rank_det_oracle
from .verdict import analyze

EXIT_NONSINGULAR = 0
EXIT_USAGE = 1
EXIT_SINGULAR = 3
EXIT_NOT_APPLICABLE = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ddsing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pa = sub.add_parser("analyze", help="dominance, block form, and singularity verdict")
    pa.add_argument("--input", required=True, help="matrix file (JSON or CSV)")
    pa.add_argument("--format", choices=["auto", "json", "csv"], default="auto")
    pa.add_argument("--weights", help="JSON array of positive column weights")
    pa.add_argument("--tol-dominance", type=float, default=1e-8)
    pa.add_argument("--tol-angle", type=float, default=1e-9)
    pa.add_argument("--tol-residual", type=float, default=1e-8)
    pa.add_argument("--exact", action="store_true",
                    help="exact rational arithmetic (real matrices only)")
    pa.add_argument("--certificate", action="store_true",
                    help="include null vectors and witnesses in the report")
    pa.add_argument("--report", choices=["json", "text"], default="json")
    pa.add_argument("--figures", metavar="DIR",
                    help="also render figures and CSV tables into DIR")

    pg = sub.add_parser("gen", help="generate test instances")
    pg.add_argument("--kind", required=True,
                    choices=["planted", *FIXTURE_KINDS],
                    type=str.lower)
    pg.add_argument("--n", required=True, type=int)
    pg.add_argument("--density", type=float, default=0.5)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--output", help="write matrix JSON here and the sidecar "
                                     "to <output>.meta.json")

    po = sub.add_parser("oracle", help="brute-force rank, determinant, null basis")
    po.add_argument("--input", required=True)
    po.add_argument("--format", choices=["auto", "json", "csv"], default="auto")
    po.add_argument("--pivot-tol", type=float, default=1e-10)
    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _cmd_analyze(args) -> int:
    fmt = sniff_format(args.input, args.format)
    matrix = parse_matrix(_read(args.input), fmt, exact=args.exact)
    weights = None
    if args.weights:
        weights = parse_weights(_read(args.weights), exact=args.exact)
    if args.exact:
        verdict = analyze_exact(matrix, weights=weights)
    else:
        tol = Tolerances(
            tol_dom=args.tol_dominance,
            tol_angle=args.tol_angle,
            tol_res=args.tol_residual,
        )
        verdict = analyze(matrix, tol, weights=weights)

    if args.report == "json":
        print(report_json(verdict, include_certificates=args.certificate))
    else:
        print(report_text(verdict, include_certificates=args.certificate))

    if args.figures:
        from .exact import to_float
        from .figures import render_report

        shown = to_float(matrix) if args.exact else matrix
        for path in render_report(shown, verdict, args.figures):
            print(f"wrote {path}", file=sys.stderr)

    if not verdict.applicable:
        return EXIT_NOT_APPLICABLE
    return EXIT_SINGULAR if verdict.singular else EXIT_NONSINGULAR


def _cmd_gen(args) -> int:
    if args.n < 1 or (args.kind == "planted" and args.n < 2):
        raise DdsingError(f"n too small for kind {args.kind}: {args.n}")
    if args.kind == "planted":
        inst = gen_singular_instance(args.n, density=args.density, seed=args.seed)
        matrix = inst.matrix
        gamma = list(inst.gamma)
    else:
        matrix = gen_fixture(args.kind, args.n, seed=args.seed)
        gamma = [1.0 + 0j] * args.n
    doc = matrix_to_dict(matrix)
    sidecar = {
        "schema": SCHEMA,
        "kind": args.kind,
        "n": args.n,
        "seed": args.seed,
        "density": args.density if args.kind == "planted" else None,
        "planted_gamma": _vector(gamma),
    }
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        meta = Path(args.output + ".meta.json")
        meta.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {args.output} and {meta}", file=sys.stderr)
    else:
        print(json.dumps(doc, indent=2))
        print(json.dumps(sidecar), file=sys.stderr)
    return 0


def _cmd_oracle(args) -> int:
    fmt = sniff_format(args.input, args.format)
    matrix = parse_matrix(_read(args.input), fmt)
    result = rank_det_oracle(matrix, pivot_tol=args.pivot_tol)
    doc = {
        "schema": SCHEMA,
        "n": int(np.asarray(matrix).shape[0]),
        "rank": result.rank,
        "det": _pair(result.det),
        "null_basis": [_vector(v) for v in result.null_basis],
    }
    print(json.dumps(doc, indent=2))
    return EXIT_SINGULAR if result.singular else EXIT_NONSINGULAR


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "gen":
            return _cmd_gen(args)
        return _cmd_oracle(args)
    except (DdsingError, OSError, ValueError) as exc:
        print(f"ddsing: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    raise SystemExit(run_cli())
