"""Collects one verdict line per acceptance criterion and prints them at the end."""

import pytest

VERDICTS: dict[int, tuple[str, str]] = {}


@pytest.fixture
def verdict(request):
    """Call with (number, detail); the outcome of the calling test decides PASS or FAIL."""
    slot = {}

    def record(number: int, detail: str = "") -> None:
        slot["number"], slot["detail"] = number, detail

    yield record
    if "number" in slot:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        VERDICTS[slot["number"]] = ("PASS" if ok else "FAIL", slot["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        status, detail = VERDICTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
