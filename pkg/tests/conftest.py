import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects one line per acceptance criterion for the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE_LINES, key=lambda s: s.split()[1]):
        terminalreporter.write_line(line)
