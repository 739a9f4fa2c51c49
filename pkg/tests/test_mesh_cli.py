import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from anisosimplex.cli import main
from anisosimplex.errors import MeshParseError
from anisosimplex.mesh import AuditConfig, Mesh, audit, audit_csv, audit_json, parse_mesh
from anisosimplex.studies import FamilySpec, family_generate

from conftest import random_rigid

DATA = Path(__file__).parent / "data"
UNIT = "2\n3 1\n0 0\n1 0\n0 1\n0 1 2\n"


def mesh_text(dim, nodes, elems):
    lines = [str(dim), f"{len(nodes)} {len(elems)}"]
    lines += [" ".join(repr(float(c)) for c in p) for p in nodes]
    lines += [" ".join(str(i) for i in e) for e in elems]
    return "\n".join(lines) + "\n"


def test_parse_unit_triangle():
    m = parse_mesh(UNIT)
    assert m.dim == 2 and m.elements == ((0, 1, 2),)
    np.testing.assert_array_equal(m.nodes, [[0, 0], [1, 0], [0, 1]])


def test_parse_comments_and_blank_lines():
    m = parse_mesh("# header\n\n2  # dim\n3 1\n0 0\n1 0 # node\n0 1\n\n0 1 2\n")
    assert len(m.elements) == 1


@pytest.mark.parametrize("text,line", [
    ("2\n3 1\n0 0\n1 0\n0 1\n0 1 99\n", 6),
    ("2\n3 1\n0 0\n1 x\n0 1\n0 1 2\n", 4),
    ("4\n3 1\n0 0\n1 0\n0 1\n0 1 2\n", 1),
    ("2\n3 1\n0 0\n1 0\n0 1\n", 5),
    ("2\n3 1\n0 0\n1 0 0\n0 1\n0 1 2\n", 4),
    ("2\n3\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(MeshParseError) as exc:
        parse_mesh(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_parse_empty():
    with pytest.raises(MeshParseError):
        parse_mesh("# nothing\n")


def test_two_tetrahedra_round_trip():
    nodes = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    elems = [(0, 1, 2, 3), (1, 2, 3, 4)]
    m = parse_mesh(mesh_text(3, nodes, elems))
    assert len(m.elements) == 2
    m2 = parse_mesh(mesh_text(3, m.nodes, m.elements))
    np.testing.assert_array_equal(m.nodes, m2.nodes)
    res = audit(m)
    assert res.summary.psi_max is not None
    assert all(r.report.assumption1_M is not None for r in res.elements)


def test_audit_unit_triangle():
    res = audit(parse_mesh(UNIT), AuditConfig(gamma0=10))
    assert res.elements[0].good is True
    assert res.summary.H_h == pytest.approx(4.0)
    assert res.summary.n_flagged == 0


def test_audit_blade_flagged():
    t = family_generate(FamilySpec("Blade2D", eps=2, s=2.0**-8))
    res = audit(parse_mesh(mesh_text(2, t.vertices, [(0, 1, 2)])))
    assert res.elements[0].good is False
    assert res.elements[0].report.H_over_h == pytest.approx(512, rel=1e-3)  # 2 s^{1-eps}
    assert res.summary.n_flagged == 1


def test_audit_empty_and_degenerate():
    res = audit(parse_mesh("2\n0 0\n"))
    assert res.summary.n_elements == 0 and res.summary.H_h is None
    text = mesh_text(2, [[0, 0], [1, 0], [2, 0], [0, 1]], [(0, 1, 2), (0, 1, 3)])
    res = audit(parse_mesh(text))
    assert [r.status for r in res.elements] == ["degenerate", "ok"]
    assert res.summary.n_degenerate == 1
    assert res.summary.H_h == pytest.approx(4.0)
    csv_text = audit_csv(res)
    assert csv_text.splitlines()[1] == "0,,,,,,,,,,degenerate"
    assert json.loads(audit_json(res))["elements"][0]["status"] == "degenerate"


def test_audit_config_validation():
    with pytest.raises(ValueError):
        AuditConfig(gamma0=0)
    with pytest.raises(ValueError):
        AuditConfig(format="xml")


def _columns_without_ids(text):
    return [line.split(",")[1:] for line in text.splitlines()]


@pytest.mark.parametrize("dim", [2, 3])
def test_audit_rigid_motion_invariance(dim, rng):
    nodes = rng.uniform(size=(dim + 2, dim))
    elems = [tuple(range(dim + 1)), tuple(range(1, dim + 2))]
    q, b = random_rigid(rng, dim)
    a = audit_csv(audit(parse_mesh(mesh_text(dim, nodes, elems))))
    c = audit_csv(audit(parse_mesh(mesh_text(dim, nodes @ q.T + b, elems))))
    assert a == c


def test_cli_audit_golden(tmp_path):
    out = tmp_path / "audit.csv"
    assert main(["audit", "--mesh", str(DATA / "two_elements.mesh"), "--out", str(out)]) == 0
    assert out.read_bytes() == (DATA / "audit_two_elements.golden.csv").read_bytes()


def test_cli_sliver_golden(capsys):
    assert main(["sliver-table", "--eps1", "1.5", "--eps2", "1.0", "--levels", "32,64,128"]) == 0
    got = capsys.readouterr().out.encode()
    assert got == (DATA / "sliver_1.5_1.0.golden.csv").read_bytes()


def test_cli_audit_json(capsys):
    assert main(["audit", "--mesh", str(DATA / "two_elements.mesh"), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["flagged"] == 1
    assert doc["elements"][0]["theta_max_deg"] == pytest.approx(90)


def test_cli_element(capsys):
    assert main(["element", "--dim", "2", "--vertices", "0,0;1,0;0,1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["H_T0"] == pytest.approx(4)
    assert rep["theta_max_deg"] == pytest.approx(90)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["element", "--dim", "2", "--vertices", "0,0;1,0;2,0"]) == 2
    assert main(["element", "--dim", "2", "--vertices", "0,0;1,0"]) == 3
    bad = tmp_path / "bad.mesh"
    bad.write_text("2\n3 1\n0 0\n1 0\n0 1\n0 1 99\n")
    assert main(["audit", "--mesh", str(bad)]) == 1
    assert "line 6" in capsys.readouterr().err
    assert main(["audit", "--mesh", str(tmp_path / "missing.mesh")]) == 3
    assert main(["sliver-table", "--eps1", "0.5", "--eps2", "1", "--levels", "8"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["sliver-table", "--eps1", "1.5"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["convergence", "--example", "III", "--eps", "3", "--levels", "8"])
    assert exc.value.code == 3


def test_cli_convergence(capsys):
    assert main(["convergence", "--example", "II", "--eps", "3", "--levels", "64,128"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "N,s,Err,r"
    assert lines[1] == "64,1.5625e-02,1.9934e-04,"
    assert main(["convergence", "--example", "I", "--eps", "3", "--levels", "64"]) == 3


def test_cli_bound(capsys):
    args = ["bound", "--family", "Dagger2D", "--eps", "1.5", "--delta", "2.5",
            "--theorem", "B-h", "--ell", "2", "--m", "1", "--p", "2", "--q", "2",
            "--levels", "16,32"]
    assert main(args) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "N,s,lhs,rhs,ratio"
    assert out[-1].startswith("# ratio_max=")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "anisosimplex", "sliver-table", "--eps1", "1.5", "--eps2", "1.0",
         "--levels", "32,64,128"],
        capture_output=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == (DATA / "sliver_1.5_1.0.golden.csv").read_bytes()
