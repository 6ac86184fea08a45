import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dgres.fields import make_extension, prime_field, rationals  # noqa: E402


@pytest.fixture(scope="session")
def Q():
    return rationals()


@pytest.fixture(scope="session")
def F2():
    return prime_field(2)


@pytest.fixture(scope="session")
def F3():
    return prime_field(3)


@pytest.fixture(scope="session")
def Qs(Q):
    return make_extension(Q, [-2, 0, 1], "s")


@pytest.fixture(scope="session")
def F4(F2):
    return make_extension(F2, [1, 1, 1], "g")


ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def data_path(*parts):
    return os.path.join(ROOT, *parts)


# -- acceptance criteria: one pass/fail line each -------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): the test is (part of) acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item._passed = rep.passed
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    n = mark.args[0]
    _CRITERIA[n] = _CRITERIA.get(n, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
