import pytest

from orthocover.covering3d import CoveringCase, density
from orthocover.orthoscheme import truncated_orthoscheme

U_OPT_736 = 0.3324288


@pytest.fixture(scope="session")
def orth736():
    return truncated_orthoscheme(7, (3, 6))


@pytest.fixture(scope="session")
def optimum736(orth736):
    return density(orth736, CoveringCase.ON_A1A2, U_OPT_736)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
