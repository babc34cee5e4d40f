import numpy as np
import pytest


def random_spd(rng, n, cond_shift=0.5):
    M = rng.standard_normal((n, n))
    K = M @ M.T + cond_shift * n * np.eye(n)
    return 0.5 * (K + K.T)


def random_sym(rng, n):
    M = rng.standard_normal((n, n))
    return 0.5 * (M + M.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_REPORT = []


def report(criterion, passed, detail):
    ACCEPTANCE_REPORT.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
