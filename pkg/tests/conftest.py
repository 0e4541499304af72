import numpy as np
import pytest

from atomshift import PhysicalParams


@pytest.fixture
def weak():
    """Dispersive working point used throughout."""
    return PhysicalParams(gamma=1.0, omega_delta=100.0)


def param_grid(n=10):
    """Log-spaced (gamma, omega_delta, |beta|) triples, n per axis."""
    gammas = np.logspace(-2, 1, n)
    deltas = np.logspace(-1, 3, n)
    betas = np.logspace(-3, 1, n)
    return [(g, d, b) for g in gammas for d in deltas for b in betas]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
