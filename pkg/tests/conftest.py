import pytest

# One line per acceptance criterion, echoed in the terminal summary so the
# pass/fail status of every criterion is visible regardless of capture mode.
ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def _record(number, title, failures):
        if failures:
            line = f"[FAIL] criterion {number}: {title} -- " + "; ".join(failures)
        else:
            line = f"[PASS] criterion {number}: {title}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
