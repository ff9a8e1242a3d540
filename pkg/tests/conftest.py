"""Shared pytest plumbing: collect acceptance-gate announcements and echo
them in the terminal summary, where output capture cannot swallow them."""

_announcements = []


def record_announcement(line):
    _announcements.append(line)


def pytest_terminal_summary(terminalreporter):
    if _announcements:
        terminalreporter.section("acceptance criteria")
        for line in _announcements:
            terminalreporter.write_line(line)
