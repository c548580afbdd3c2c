import warnings
from collections import OrderedDict

import pytest

from keiperli.dh import DHPhiCache, dh_range
from keiperli.liseq import lambda_range
from keiperli.specials import PhiCache

_CRITERIA: "OrderedDict[int, list]" = OrderedDict()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for name, value in report.user_properties:
        if name == "criterion":
            _CRITERIA.setdefault(value, []).append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        outcomes = _CRITERIA[k]
        ok = all(o == "passed" for _, o in outcomes)
        failed = [nid.split("::")[-1] for nid, o in outcomes if o != "passed"]
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}"
        if failed:
            line += "  (" + ", ".join(failed) + ")"
        terminalreporter.write_line(line)


@pytest.fixture
def criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", marker.args[0])


@pytest.fixture(scope="session")
def riemann_cache():
    return PhiCache("riemann")


@pytest.fixture(scope="session")
def riemann_run(riemann_cache):
    """{n: SequencePoint} for n = 100..4000 at 12 digits (about two minutes)."""
    points = lambda_range(range(100, 4001), 12, threads=1, cache=riemann_cache)
    return {p.n: p for p in points}


@pytest.fixture(scope="session")
def dh_minus_run():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        points = dh_range(range(1, 481), "-", 12, threads=1, cache=DHPhiCache("-"))
    return {p.n: p for p in points}


@pytest.fixture(scope="session")
def dh_plus_run():
    points = dh_range(range(100, 4001), "+", 12, threads=1, cache=DHPhiCache("+"))
    return {p.n: p for p in points}
