import pytest

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
