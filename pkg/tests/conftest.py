"""Shared pytest plumbing: the acceptance suite registers one line per
criterion here, and the terminal summary replays them after capture ends so
the verdicts are visible in any invocation."""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
