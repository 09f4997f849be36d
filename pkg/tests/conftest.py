import numpy as np
import pytest

# registry for the acceptance suite's one-line-per-criterion summary
_ACCEPTANCE_LINES = []


def record_criterion(number, description, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    line = f"ACCEPTANCE {number:>2}: {status} - {description}"
    if detail:
        line += f" ({detail})"
    _ACCEPTANCE_LINES.append((number, line))
    return passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
