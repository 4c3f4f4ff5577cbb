import math

import pytest

from invsurf.curves import builtin_curve
from invsurf.developable import TangentDevelopableModel
from invsurf.inversion import UNIT_SPHERE

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def helix():
    return builtin_curve("helix", (1.0, 1.0))


@pytest.fixture(scope="session")
def helix_model(helix):
    return TangentDevelopableModel(helix)


@pytest.fixture(scope="session")
def unit_sphere():
    return UNIT_SPHERE


def grid_20x20():
    """The reference grid: s in [0, 2 pi] x 20, u in [0.2, 1.5] x 20."""
    return [
        (2 * math.pi * i / 19, 0.2 + 1.3 * j / 19) for i in range(20) for j in range(20)
    ]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
