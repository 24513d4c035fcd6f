"""Acceptance criteria 1-12; each test prints a PASS/FAIL line with the measured values."""
import pytest

from artifact import acceptance

PROFILE = "full"


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, record_line):
    result = criterion(PROFILE)
    line = result.line()
    print(line)
    record_line(line)
    assert result.passed, line


if __name__ == "__main__":
    for r in acceptance.run_all(PROFILE):
        print(r.line())
