"""Plain-text simplicial meshes and the per-element geometric audit.

Mesh format::

    2            # dimension
    3 1          # n_nodes n_elems
    0 0          # one coordinate line per node
    1 0
    0 1
    0 1 2        # one line of d+1 zero-based node indices per element

Everything after ``#`` on a line is ignored, as are blank lines.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateSimplexError, MeshParseError
from .geometry import GeometricReport, Simplex, full_report

CSV_COLUMNS = (
    "elem_id",
    "h",
    "measure",
    "H_T0",
    "H_over_h",
    "alpha_ratio",
    "circumradius",
    "theta_max_deg",
    "psi_max_deg",
    "assumption1_M",
    "good",
)


def fmt(x: Optional[float]) -> str:
    """Lowercase scientific notation with 5 significant digits; '' for None."""
    return "" if x is None else f"{x:.4e}"


@dataclass(frozen=True)
class Mesh:
    dim: int
    nodes: np.ndarray
    elements: tuple

    def simplex(self, k: int) -> Simplex:
        return Simplex(self.nodes[list(self.elements[k])])


def _tokens(text: str):
    """(line number, column of first token, tokens) for each content line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        yield lineno, col, line.split()


def _numbers(tokens, conv, lineno, what):
    out = []
    for tok in tokens:
        try:
            out.append(conv(tok))
        except ValueError:
            raise MeshParseError(f"cannot read {tok!r} as {what}", line=lineno) from None
    return out


def parse_mesh(text: str) -> Mesh:
    lines = list(_tokens(text))
    if not lines:
        raise MeshParseError("empty mesh file")
    lineno, col, toks = lines[0]
    if len(toks) != 1:
        raise MeshParseError("first line must hold the dimension only", line=lineno, column=col)
    (dim,) = _numbers(toks, int, lineno, "an integer dimension")
    if dim not in (2, 3):
        raise MeshParseError(f"dimension must be 2 or 3, got {dim}", line=lineno, column=col)
    if len(lines) < 2:
        raise MeshParseError("missing 'n_nodes n_elems' line")
    lineno, col, toks = lines[1]
    if len(toks) != 2:
        raise MeshParseError("expected 'n_nodes n_elems'", line=lineno, column=col)
    n_nodes, n_elems = _numbers(toks, int, lineno, "a count")
    if n_nodes < 0 or n_elems < 0:
        raise MeshParseError("counts must be non-negative", line=lineno, column=col)
    body = lines[2:]
    if len(body) != n_nodes + n_elems:
        last = body[-1][0] if body else lineno
        raise MeshParseError(
            f"expected {n_nodes} node and {n_elems} element lines, found {len(body)} lines",
            line=last,
        )
    nodes = np.empty((n_nodes, dim))
    for k, (ln, c, toks) in enumerate(body[:n_nodes]):
        if len(toks) != dim:
            raise MeshParseError(f"node line needs {dim} coordinates", line=ln, column=c)
        vals = _numbers(toks, float, ln, "a coordinate")
        if not all(math.isfinite(v) for v in vals):
            raise MeshParseError("coordinates must be finite", line=ln, column=c)
        nodes[k] = vals
    elements = []
    for ln, c, toks in body[n_nodes:]:
        if len(toks) != dim + 1:
            raise MeshParseError(f"element line needs {dim + 1} node indices", line=ln, column=c)
        idx = _numbers(toks, int, ln, "a node index")
        for i in idx:
            if not 0 <= i < n_nodes:
                raise MeshParseError(
                    f"node index {i} out of range for {n_nodes} nodes", line=ln, column=c
                )
        elements.append(tuple(idx))
    nodes.setflags(write=False)
    return Mesh(dim, nodes, tuple(elements))


@dataclass(frozen=True)
class AuditConfig:
    gamma0: float = 10.0
    format: str = "csv"

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValueError("gamma0 must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


@dataclass
class ElementAudit:
    elem_id: int
    status: str  # "ok" or "degenerate"
    report: Optional[GeometricReport] = None
    good: Optional[bool] = None


@dataclass
class AuditSummary:
    n_elements: int
    n_degenerate: int
    n_flagged: int
    H_h: Optional[float]
    theta_max: Optional[float]
    psi_max: Optional[float]


@dataclass
class AuditResult:
    elements: list
    summary: AuditSummary
    config: AuditConfig = field(default_factory=AuditConfig)


def audit(mesh: Mesh, cfg: AuditConfig = AuditConfig()) -> AuditResult:
    """Geometric report for every element; good means H_T0/h <= gamma0.

    Degenerate elements are reported but left out of the summary maxima.
    Flagged elements are the non-degenerate ones that are not good.
    """
    rows = []
    for k in range(len(mesh.elements)):
        try:
            rep = full_report(mesh.simplex(k))
        except DegenerateSimplexError:
            rows.append(ElementAudit(k, "degenerate"))
            continue
        rows.append(ElementAudit(k, "ok", rep, rep.H_over_h <= cfg.gamma0))
    ok = [r.report for r in rows if r.status == "ok"]
    psis = [r.psi_max for r in ok if r.psi_max is not None]
    summary = AuditSummary(
        n_elements=len(rows),
        n_degenerate=sum(r.status == "degenerate" for r in rows),
        n_flagged=sum(r.status == "ok" and not r.good for r in rows),
        H_h=max((r.H_T0 for r in ok), default=None),
        theta_max=max((r.theta_max for r in ok), default=None),
        psi_max=max(psis, default=None),
    )
    return AuditResult(rows, summary, cfg)


def _deg(x):
    return None if x is None else math.degrees(x)


def audit_csv(result: AuditResult) -> str:
    """CSV rows in element order followed by '#'-prefixed summary lines."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in result.elements:
        if row.status == "degenerate":
            w.writerow([row.elem_id] + [""] * (len(CSV_COLUMNS) - 2) + ["degenerate"])
            continue
        r = row.report
        w.writerow(
            [
                row.elem_id,
                fmt(r.h),
                fmt(r.measure),
                fmt(r.H_T0),
                fmt(r.H_over_h),
                fmt(r.alpha_ratio),
                fmt(r.circumradius),
                fmt(_deg(r.theta_max)),
                fmt(_deg(r.psi_max)),
                fmt(r.assumption1_M),
                "true" if row.good else "false",
            ]
        )
    s = result.summary
    buf.write(
        f"# elements={s.n_elements} degenerate={s.n_degenerate} flagged={s.n_flagged}"
        f" gamma0={fmt(result.config.gamma0)}\n"
    )
    buf.write(
        f"# H(h)={fmt(s.H_h)} theta_max_deg={fmt(_deg(s.theta_max))}"
        f" psi_max_deg={fmt(_deg(s.psi_max))}\n"
    )
    return buf.getvalue()


def audit_json(result: AuditResult) -> str:
    elements = []
    for row in result.elements:
        item = {"elem_id": row.elem_id, "status": row.status}
        if row.report is not None:
            r = row.report
            item.update(
                h=r.h,
                measure=r.measure,
                H_T0=r.H_T0,
                H_over_h=r.H_over_h,
                alpha_ratio=r.alpha_ratio,
                circumradius=r.circumradius,
                theta_max_deg=_deg(r.theta_max),
                psi_max_deg=_deg(r.psi_max),
                assumption1_M=r.assumption1_M,
                good=row.good,
            )
        elements.append(item)
    s = result.summary
    summary = {
        "elements": s.n_elements,
        "degenerate": s.n_degenerate,
        "flagged": s.n_flagged,
        "gamma0": result.config.gamma0,
        "H_h": s.H_h,
        "theta_max_deg": _deg(s.theta_max),
        "psi_max_deg": _deg(s.psi_max),
    }
    return json.dumps({"elements": elements, "summary": summary}, indent=2) + "\n"
