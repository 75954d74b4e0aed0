import logging

import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance_lines():
    return _LINES


@pytest.fixture(autouse=True)
def _quiet_wrap_warnings():
    # the periodic-wrap warning is expected in long runs
    logging.getLogger("qactive.observables").setLevel(logging.ERROR)
    yield
    logging.getLogger("qactive.observables").setLevel(logging.NOTSET)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
