"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

import re

import pytest

_ACCEPTANCE = {}
_NAME = re.compile(r"test_c(\d+)([a-z]?)_")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if not item.nodeid.startswith("tests/test_acceptance.py"):
        return
    match = _NAME.match(item.name)
    if match is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, part = int(match.group(1)), match.group(2)
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.setdefault(number, []).append((part, title, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        ok = all(passed for _, _, passed in parts)
        failed = [f"{number}{part}: {title}" for part, title, passed in parts if not passed]
        head = parts[0][1] if len(parts) == 1 else f"{len(parts)} sub-checks"
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {head}"
        if failed:
            line += "  [failed: " + "; ".join(failed) + "]"
        terminalreporter.write_line(line)
