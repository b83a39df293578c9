import numpy as np
import pytest

from amalgam import BumpProfile, GridSpec, WindowFamily, make_corpus

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line per acceptance criterion; the lines are
    echoed in the terminal summary."""

    def _record(number, name, ok):
        _ACCEPTANCE_LINES.append(
            f"[criterion {number}] {name}: {'PASS' if ok else 'FAIL'}"
        )

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(_ACCEPTANCE_LINES)):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bump():
    return BumpProfile()


@pytest.fixture(scope="session")
def small_grid():
    """n=2 grid that admits K = 2 windows quickly."""
    return GridSpec((2, 2), (16, 16))


@pytest.fixture(scope="session")
def small_family():
    return WindowFamily(2, 2)


@pytest.fixture(scope="session")
def small_corpus(small_grid):
    return make_corpus(small_grid, 2, 8, 1234)


@pytest.fixture(scope="session")
def grid3d():
    """n=3 grid admitting K = 2 (N/(2L) = 4 > 3)."""
    return GridSpec((2, 2, 2), (16, 16, 16))


@pytest.fixture(scope="session")
def family3d():
    return WindowFamily(3, 2)


@pytest.fixture(scope="session")
def corpus3d(grid3d):
    return make_corpus(grid3d, 2, 4, 77)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240517)
