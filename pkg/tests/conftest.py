"""Shared pytest wiring: surface acceptance verdicts past output capture."""

VERDICT_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # Captured stdout of passing tests is discarded, so the acceptance
    # one-line-per-criterion report is replayed here where it always shows.
    if VERDICT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in VERDICT_LINES:
            terminalreporter.line(line)
