import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_line():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)
