import pytest

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Call ``criterion(k, ok, detail)`` once per acceptance criterion."""

    def record(k: int, ok: bool, detail: str) -> bool:
        _CRITERIA[k] = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        print(_CRITERIA[k])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
