import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one summary line per acceptance criterion, pass or fail."""

    def record(number: int, title: str):
        def emit(ok: bool, detail: str):
            line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
            ACCEPTANCE_LINES[number] = line
            print(line)
            return ok

        return emit

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
