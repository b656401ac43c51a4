import numpy as np
import pytest

from uclincentive._accel import NUMBA_AVAILABLE

BACKENDS = ["numba", "numpy"] if NUMBA_AVAILABLE else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for the acceptance summary."""

    def record(number, name, ok, detail):
        ACCEPTANCE_LINES.append(f"criterion {number} {'PASS' if ok else 'FAIL'}: {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
