"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            number, title = marker.args
            _CRITERIA[number] = {"title": title, "nodeid": item.nodeid, "outcome": "not run"}


def pytest_runtest_logreport(report):
    for entry in _CRITERIA.values():
        if entry["nodeid"] != report.nodeid:
            continue
        if report.when == "call" or report.outcome != "passed":
            if report.failed:
                entry["outcome"] = "FAIL"
            elif report.skipped:
                entry["outcome"] = "SKIP"
            elif report.when == "call":
                entry["outcome"] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if all(e["outcome"] == "not run" for e in _CRITERIA.values()):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {entry['outcome']:<7} {entry['title']}")


@pytest.fixture(scope="session")
def full_solutions():
    from fiblucas.equations import F_LL, L_FF
    from fiblucas.search import SearchRange, enumerate_solutions

    rng = SearchRange(75, 160)
    return {kind: enumerate_solutions(kind, rng) for kind in (F_LL, L_FF)}
