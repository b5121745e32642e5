from collections import OrderedDict

import pytest

# criterion number -> list of (part, passed, detail)
_RESULTS: "OrderedDict[int, list]" = OrderedDict()
_TITLES: dict[int, str] = {}


@pytest.fixture
def record():
    """Log one part of an acceptance criterion; the summary prints one line each."""

    def _record(number: int, title: str, part: str, passed: bool, detail: str) -> bool:
        _TITLES[number] = title
        _RESULTS.setdefault(number, []).append((part, bool(passed), detail))
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        parts = _RESULTS[number]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        details = "; ".join(f"{part}: {detail}" for part, _, detail in parts)
        terminalreporter.write_line(f"[{status}] criterion {number:2d} ({_TITLES[number]}): {details}")
