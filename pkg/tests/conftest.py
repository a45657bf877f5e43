import numpy as np
import pytest

from sectorflow import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    """Each importable kernel backend in turn (compiled and pure Python)."""
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
