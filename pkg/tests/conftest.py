from __future__ import annotations

import re

_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(key, True)
        _ACCEPTANCE[key] = prev and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), ok in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' ')}: {'PASS' if ok else 'FAIL'}")
