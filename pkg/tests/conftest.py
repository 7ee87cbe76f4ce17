import math

import numpy as np
import pytest

from kcbs_lab import Z_STATE, build_pentagram, gauge_fix

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pentagram():
    return build_pentagram(math.pi / 5)


@pytest.fixture(scope="session")
def pentagram_params(pentagram):
    return gauge_fix(Z_STATE, pentagram.vectors[0], pentagram.vectors[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def valid_grid(n):
    """Interior (zeta, theta) lattice of the canonical domain, half-step offsets."""
    pts = []
    for i in range(n):
        z = (i + 0.5) * (math.pi / 2) / n
        for j in range(n):
            pts.append((z, math.pi / 2 + (j + 0.5) * z / n))
    return pts
