import pytest

_REPORT_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Recorder for the one-line verdicts of the acceptance tests."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _REPORT_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _REPORT_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in _REPORT_LINES:
            terminalreporter.write_line(line)
