import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Record one acceptance line; it is echoed live and in the final summary."""

    def report(number: int, status: str, text: str) -> None:
        line = f"[{status}] criterion {number}: {text}"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
