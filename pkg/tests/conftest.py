import numpy as np
import pytest

from berrymoments.geometry import Coordination, build_geometry
from berrymoments.spectra import eigenvalues

_ACCEPTANCE = []


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile numba kernels once so timing criteria measure steady-state cost
    eigenvalues(np.eye(6, dtype=complex))


@pytest.fixture(params=list(Coordination), ids=lambda c: f"{c.value}fold")
def coordination(request):
    return request.param


@pytest.fixture
def geometry(coordination):
    return build_geometry(coordination)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((marker.args[0], item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    by_criterion = {}
    for criterion, name, outcome in _ACCEPTANCE:
        by_criterion.setdefault(criterion, []).append((name, outcome))
    for criterion in sorted(by_criterion):
        results = by_criterion[criterion]
        failed = [name for name, outcome in results if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        line = f"[{status}] criterion {criterion:>2}: {len(results) - len(failed)}/{len(results)} checks"
        if failed:
            line += " (failed: " + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
