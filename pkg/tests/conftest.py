import numpy as np
import pytest

from gaussianize import _kernels_numba, _kernels_numpy

BACKENDS = {"numba": _kernels_numba, "numpy": _kernels_numpy}

# filled by test_acceptance.py, reported after the run
ACCEPTANCE_LINES = []


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    """Each kernel implementation in turn."""
    return BACKENDS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
