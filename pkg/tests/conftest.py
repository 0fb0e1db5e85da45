import pytest

_ACCEPTANCE = []


class AcceptanceRecorder:
    def __call__(self, label: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    def note(self, label: str, detail: str) -> None:
        line = f"INFO  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)


@pytest.fixture
def acceptance():
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
