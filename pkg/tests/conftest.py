import numpy as np
import pytest

from projcauchy import LSCParams, PlanePolygon

from oracles import FIG4, UNIT_TRIANGLE

ACCEPTANCE_LINES = []


@pytest.fixture
def unit_triangle():
    return PlanePolygon(UNIT_TRIANGLE)


@pytest.fixture
def fig4():
    return LSCParams(**FIG4)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
