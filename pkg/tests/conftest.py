import os
import sys
from collections import defaultdict

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}
_outcomes = defaultdict(list)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            n = m.args[0]
            _criteria.setdefault(n, m.args[1] if len(m.args) > 1 else "")
            item.user_properties.append(("acceptance", n))


def pytest_runtest_logreport(report):
    n = dict(report.user_properties).get("acceptance")
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[n].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        res = _outcomes.get(n)
        if not res:
            status = "NOT RUN"
        else:
            status = "PASS" if all(res) else "FAIL"
        tr.write_line(f"criterion {n:2d}: {status:7s} {_criteria[n]}")
