import re
import warnings

import numpy as np
import pytest

from qcl.body import InconclusiveMembershipWarning

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InconclusiveMembershipWarning)
        yield


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[int(m.group(1))] = (m.group(2), "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        name, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {name.replace('_', ' ')}")
