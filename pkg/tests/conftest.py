from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=["python", "cython"])
def kernel_module(request):
    if request.param == "python":
        from treespile import _kernels_py as mod
    else:
        mod = pytest.importorskip("treespile._kernels")
    return mod


_CRITERIA: dict[int, tuple[str, str]] = {}
_BY_NODE: dict[str, tuple[int, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if report.nodeid not in _BY_NODE:
        return
    number, title = _BY_NODE[report.nodeid]
    _CRITERIA[number] = ("PASS" if report.passed else "FAIL", title)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _BY_NODE[item.nodeid] = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
