import pytest

_RESULTS = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, passed, detail)``."""
    def record(number, title, passed, detail=""):
        _RESULTS[number] = (title, bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, detail = _RESULTS[number]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title}: {detail}")
