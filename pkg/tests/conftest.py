import re

import pytest

from polydisc import _backend

ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return line


@pytest.fixture
def both_backends():
    """Run a block under each available backend and restore the default afterwards."""
    prev = _backend.name()
    yield _backend.available()
    _backend.use(prev)


def _order(item):
    key = str(item[0])
    return int(re.match(r"\d+", key).group()), key


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES, key=_order):
        terminalreporter.write_line(line)
