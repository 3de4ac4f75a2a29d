import numpy as np
import pytest

from aweno.grid import fill_ghost_points, with_ghosts


def padded(U, bc, model=None, grid=None):
    """Interior field -> ghost-filled field."""
    return fill_ghost_points(with_ghosts(np.asarray(U, dtype=float)), bc, model, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


#: one line per acceptance criterion, printed after the test session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
