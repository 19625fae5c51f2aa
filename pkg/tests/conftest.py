import numpy as np
import pytest

from gospace import su3
from gospace.homspace import EnergyForm


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))


@pytest.fixture(scope="session")
def su3_alg():
    return su3.su3()


@pytest.fixture(scope="session")
def model_12():
    return su3.builtin_su3_su2(1.0, 2.0)


@pytest.fixture(scope="session")
def model_11():
    return su3.builtin_su3_su2(1.0, 1.0)


@pytest.fixture(scope="session")
def broken_form():
    # e1^2 + 2 e2^2 + e3^2 + e4^2 + z^2 written as 1/2 p^T S p
    return EnergyForm.quadratic(2.0 * np.diag([1.0, 2.0, 1.0, 1.0, 1.0]))


def unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}")
