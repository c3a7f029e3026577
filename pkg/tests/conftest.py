from __future__ import annotations

import pytest

_results: list[tuple[int, str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _results.append((number, title, "PASS" if report.passed else "FAIL", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, duration in sorted(_results):
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({duration:.1f}s)")
