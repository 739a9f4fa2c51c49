import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# Acceptance bookkeeping: tests marked ``criterion(n, title)`` feed one
# PASS/FAIL line per criterion into the terminal summary.
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "failed": []})
    if not rep.passed:
        entry["ok"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if e["ok"] else "FAIL"
        line = f"criterion {number:2d} {status}  {e['title']}"
        if e["failed"]:
            line += f"  (failed: {', '.join(e['failed'])})"
        terminalreporter.write_line(line)


def random_simplex(rng, dim, anisotropic=True, min_quality=1e-6):
    """Random non-degenerate simplex, optionally squashed along random axes."""
    while True:
        v = rng.uniform(-1.0, 1.0, size=(dim + 1, dim))
        if anisotropic:
            v = v * 10.0 ** rng.uniform(-3.0, 0.0, size=dim)
            q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
            v = v @ q.T
        edges = v[1:] - v[0]
        vol = abs(np.linalg.det(edges)) / (2 if dim == 2 else 6)
        h = max(
            np.linalg.norm(v[i] - v[j]) for i in range(dim + 1) for j in range(i + 1, dim + 1)
        )
        if vol > min_quality * h**dim:
            return v


def random_rigid(rng, dim):
    """Random orthogonal matrix (possibly a reflection) and translation."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if rng.random() < 0.5:
        q[:, 0] = -q[:, 0]
    return q, rng.uniform(-5.0, 5.0, size=dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
