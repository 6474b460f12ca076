import numpy as np
import pytest

from secidx.model import make_system
from secidx.polymat import PolyMatrix
from secidx.suite import build_suite

_acceptance = {}


def example_system(l1=1.0, l2=2.0):
    return make_system([[l1, 0], [0, l2]], [[1, 1], [1, -1]])


def example_R(l1=1.0, l2=2.0):
    # [[xi - l1, xi - l1], [xi - l2, -(xi - l2)]]
    return PolyMatrix.from_entries([[[-l1, 1], [-l1, 1]], [[-l2, 1], [l2, -1]]])


@pytest.fixture
def ex1():
    return example_system()


@pytest.fixture
def ex1_R():
    return example_R()


@pytest.fixture
def three_sensor():
    """n = 1, N = 3, every sensor sees the state: delta = 3."""
    return make_system([[2]], [[1], [1], [1]])


@pytest.fixture(scope="session")
def suite():
    return build_suite()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "error"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
