import numpy as np
import pytest

from gmalg import catalog

# one PASS/FAIL line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {line}")


@pytest.fixture(scope="session")
def g425():
    return catalog.full(4, 2, 5)


@pytest.fixture(scope="session")
def g315():
    return catalog.full(3, 1, 5)


@pytest.fixture(scope="session")
def t35():
    return catalog.triangular(3, 5)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)
