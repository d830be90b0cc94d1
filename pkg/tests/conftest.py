"""Per-criterion summary lines for the acceptance suite."""

from collections import defaultdict

import pytest

_RESULTS = defaultdict(list)
_TITLES = {}
_SETUP = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if call.when == "setup":
        _SETUP[item.nodeid] = call.duration
    if call.when != "call":
        return
    number, title = mark.args
    _TITLES[number] = title
    if call.excinfo is None:
        outcome = "pass"
    elif item.get_closest_marker("xfail") or call.excinfo.errisinstance(pytest.xfail.Exception):
        outcome = "xfail"
    else:
        outcome = "fail"
    _RESULTS[number].append((item.name, outcome, call.duration + _SETUP.get(item.nodeid, 0.0)))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        rows = _RESULTS[number]
        failed = [n for n, o, _ in rows if o == "fail"]
        xfailed = [n for n, o, _ in rows if o == "xfail"]
        status = "FAIL" if failed else "PASS"
        seconds = sum(d for _, _, d in rows)
        note = f"; expected failures: {', '.join(xfailed)}" if xfailed else ""
        if failed:
            note += f"; failed: {', '.join(failed)}"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {_TITLES[number]} "
                                    f"({len(rows)} tests, {seconds:.1f} s{note})")
