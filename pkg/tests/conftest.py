import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

S10, S26 = math.sqrt(10), math.sqrt(26)
OBLIQUE_ROWS = [[3.0, -1.0], [-1.0, 5.0]]
OBLIQUE_UNIT = np.array([[3 / S10, -1 / S10], [-1 / S26, 5 / S26]])

_acceptance: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _acceptance.get(name, "PASS")
        _acceptance[name] = "PASS" if prev == "PASS" and rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _acceptance.items():
        terminalreporter.write_line(f"{status} {name}")


@pytest.fixture
def oblique_rows():
    return [list(r) for r in OBLIQUE_ROWS]


@pytest.fixture
def oblique_unit():
    return OBLIQUE_UNIT.copy()
