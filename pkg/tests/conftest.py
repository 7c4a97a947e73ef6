"""Shared test plumbing: collects acceptance-criterion verdict lines and
prints them once in the terminal summary, so a plain ``pytest -v`` run shows
one pass/fail line per criterion."""

CRITERION_LINES: list[str] = []


def record_criterion(line: str) -> None:
    CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
