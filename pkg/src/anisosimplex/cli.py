"""Command-line front end.

Exit codes: 0 success, 1 mesh parse error, 2 degenerate element in
``element`` mode, 3 invalid arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import (
    AnisoSimplexError,
    DegenerateSimplexError,
    InvalidFamilyParamsError,
    MeshParseError,
)
from .fields import study_field
from .geometry import Simplex, full_report
from .interpolation import OperatorSpec
from .mesh import AuditConfig, audit, audit_csv, audit_json, fmt, parse_mesh
from .norms import NormSpec
from .studies import (
    FAMILIES,
    TETRA_VARIANTS,
    FamilySpec,
    measure_bound_constant,
    run_convergence,
    sliver_table,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DEGENERATE = 2
EXIT_USAGE = 3

_FAMILY_DIM = {"RightAngled2D": 2, "Dagger2D": 2, "Blade2D": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("levels must be positive integers")
    return vals


def _exponent(text: str):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 1, 2 or inf, got {text!r}")


def _vertices(text: str, dim: int) -> np.ndarray:
    pts = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            pts.append([float(c) for c in chunk.split(",")])
        except ValueError:
            raise UsageError(f"cannot read vertex {chunk!r}")
    if len(pts) != dim + 1 or any(len(p) != dim for p in pts):
        raise UsageError(f"need {dim + 1} vertices with {dim} coordinates each")
    return np.array(pts)


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_audit(args) -> int:
    try:
        with open(args.mesh, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read mesh file: {exc}")
    mesh = parse_mesh(text)
    if not args.gamma0 > 0:
        raise UsageError("--gamma0 must be positive")
    cfg = AuditConfig(gamma0=args.gamma0, format=args.format)
    result = audit(mesh, cfg)
    _write(audit_csv(result) if args.format == "csv" else audit_json(result), args.out)
    return EXIT_OK


def cmd_element(args) -> int:
    s = Simplex(_vertices(args.vertices, args.dim))
    rep = full_report(s).as_dict()
    rep["theta_max_deg"] = math.degrees(rep["theta_max"])
    rep["psi_max_deg"] = None if rep["psi_max"] is None else math.degrees(rep["psi_max"])
    sys.stdout.write(json.dumps(rep, indent=2) + "\n")
    return EXIT_OK


def cmd_sliver(args) -> int:
    rows = sliver_table(args.eps1, args.eps2, args.levels)
    cols = ("L6_over_L1", "h3_over_measure", "H_over_h", "R3_over_h")
    body = [[r.N, fmt(r.s)] + [fmt(r.quantities[c]) for c in cols] for r in rows]
    _write(_csv(("N", "s") + cols, body), args.out)
    return EXIT_OK


def cmd_convergence(args) -> int:
    family = "ConvI" if args.example == "I" else "ConvII"
    if family == "ConvI" and args.delta is None:
        raise UsageError("--delta is required for example I")
    op = OperatorSpec(args.operator, args.k)
    rows = run_convergence(family, args.eps, args.delta, args.levels, op)
    body = [
        [r.N, fmt(r.s), fmt(r.quantities["Err"]), fmt(r.quantities["r"])] for r in rows
    ]
    _write(_csv(("N", "s", "Err", "r"), body), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    fam = FamilySpec(
        args.family,
        eps=args.eps,
        delta=args.delta,
        gamma=args.gamma,
        eps1=args.eps1,
        eps2=args.eps2,
        variant=args.variant,
    )
    dim = _FAMILY_DIM.get(args.family, 3)
    norm = NormSpec(m=args.m, q=args.q, ell=args.ell, p=args.p)
    op = OperatorSpec(args.operator, args.k)
    report = measure_bound_constant(
        fam, study_field(dim), args.theorem, norm, [1.0 / n for n in args.levels], op
    )
    body = [
        [n, fmt(s), fmt(lhs), fmt(rhs), fmt(ratio)]
        for n, s, lhs, rhs, ratio in zip(
            args.levels, report.levels, report.lhs, report.rhs, report.ratios
        )
    ]
    text = _csv(("N", "s", "lhs", "rhs", "ratio"), body)
    text += f"# ratio_max={fmt(report.ratio_max)} zero_rhs={str(report.zero_rhs).lower()}\n"
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="anisosimplex", description="Anisotropic simplex geometry and interpolation studies.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("audit", help="per-element geometric audit of a mesh file")
    a.add_argument("--mesh", required=True)
    a.add_argument("--gamma0", type=float, default=10.0)
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--out")
    a.set_defaults(func=cmd_audit)

    e = sub.add_parser("element", help="geometric report for one simplex (JSON)")
    e.add_argument("--dim", type=int, choices=(2, 3), required=True)
    e.add_argument("--vertices", required=True, help='e.g. "0,0;1,0;0,1"')
    e.set_defaults(func=cmd_element)

    sl = sub.add_parser("sliver-table", help="sliver quantities for N in --levels")
    sl.add_argument("--eps1", type=float, required=True)
    sl.add_argument("--eps2", type=float, required=True)
    sl.add_argument("--levels", type=_int_list, required=True)
    sl.add_argument("--out")
    sl.set_defaults(func=cmd_sliver)

    c = sub.add_parser("convergence", help="interpolation error and rates on ConvI/ConvII")
    c.add_argument("--example", choices=("I", "II"), required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--delta", type=float)
    c.add_argument("--levels", type=_int_list, required=True)
    c.add_argument("--k", type=int, choices=(1, 2), default=1)
    c.add_argument("--operator", choices=("lagrange", "cr"), default="lagrange")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convergence)

    b = sub.add_parser("bound", help="measured lhs/rhs of an error bound over a family")
    b.add_argument("--family", choices=FAMILIES, required=True)
    b.add_argument("--theorem", choices=("A", "B-h", "B-dir"), required=True)
    b.add_argument("--ell", type=int, default=2)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--p", type=_exponent, default=2.0)
    b.add_argument("--q", type=_exponent, default=2.0)
    b.add_argument("--levels", type=_int_list, required=True, help="values of N, s = 1/N")
    b.add_argument("--eps", type=float)
    b.add_argument("--delta", type=float)
    b.add_argument("--gamma", type=float)
    b.add_argument("--eps1", type=float)
    b.add_argument("--eps2", type=float)
    b.add_argument("--variant", choices=TETRA_VARIANTS)
    b.add_argument("--k", type=int, choices=(1, 2), default=1)
    b.add_argument("--operator", choices=("lagrange", "cr"), default="lagrange")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MeshParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateSimplexError as exc:
        print(f"degenerate element: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, InvalidFamilyParamsError, ValueError, AnisoSimplexError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
