import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Store a one-line PASS/FAIL verdict for the end-of-run acceptance summary."""

    def record(number: str, title: str, passed: bool, detail: str = "") -> None:
        state = "PASS" if passed else "FAIL"
        line = f"criterion {number} [{state}] {title}"
        if detail:
            line += f": {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
