from __future__ import annotations

import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_terminal_summary(terminalreporter):
    results: dict[int, bool] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            m = CRITERION.search(getattr(report, "nodeid", ""))
            if m:
                k = int(m.group(1))
                results[k] = results.get(k, True) and outcome == "passed"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 11):
        status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[results.get(k)]
        terminalreporter.write_line(f"ACCEPTANCE criterion {k}: {status}")
