"""Shared test plumbing: the acceptance scorecard.

test_acceptance.py appends one line per criterion as it runs; the
summary hook prints them after the test report so a logged run always
ends with the full scorecard, even under output capture.
"""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.line(line)
