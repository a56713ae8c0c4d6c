"""Shared pytest wiring: surfaces acceptance verdict lines in the summary."""

VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.line(line)
