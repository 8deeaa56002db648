import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance-criterion line; returns the pass flag for asserting."""

    def record(label: str, passed: bool, detail: str) -> bool:
        _CRITERIA.append((label, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_CRITERIA, key=lambda r: _sort_key(r[0])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")


def _sort_key(label: str):
    head = label.split()[0].rstrip(".:")
    digits = "".join(c for c in head if c.isdigit())
    return (int(digits) if digits else 99, label)
