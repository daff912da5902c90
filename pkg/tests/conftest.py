"""Shared fixtures and the acceptance summary printed after the run."""

import pytest

_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, name): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    key = mark.args
    failed = rep.failed or _outcomes.get(key) is False
    _outcomes[key] = not failed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, name in sorted(_outcomes):
        status = "PASS" if _outcomes[(n, name)] else "FAIL"
        terminalreporter.write_line(f"criterion {n} {name}: {status}")
