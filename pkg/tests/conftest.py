import numpy as np
import pytest

from tsdhsic.panel import TimeSeriesPanel

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def single_panel(*series, names=None):
    names = names or tuple("ABCDEFG"[: len(series)])
    return TimeSeriesPanel(tuple(names), tuple(np.asarray(s, float)[None, :] for s in series))


def random_psd(rng, n):
    a = rng.normal(size=(n, n + 2))
    g = a @ a.T
    return (g + g.T) / 2
