from __future__ import annotations

import math

import pytest

from phasewave.lattice import LatticeConfig
from phasewave.stress import CubicStress

# strains where the default cubic has unit slope: sigma'(1 +- 1/sqrt 2) = 1
P_TAU_ONE = 1.0 - math.sqrt(0.5)
P_TAU_ONE_RIGHT = 1.0 + math.sqrt(0.5)

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def default_stress():
    return CubicStress()


@pytest.fixture
def cfg_n2_p1():
    return LatticeConfig(2, 1.0, 0.5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
