"""Per-criterion PASS/FAIL summary for the acceptance suite."""

from collections import OrderedDict

_TITLES = {
    1: "equilibrium exactness",
    2: "equilibrium identity sweep",
    3: "adjudicator goldens",
    4: "adjudicator property suite",
    5: "court replay golden",
    6: "learning convergence",
    7: "money and percent formatting",
    8: "determinism across processes",
    9: "file formats and diagnostics",
    10: "SVG diagram",
}

_owner = {}
_results = OrderedDict((n, None) for n in _TITLES)


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker:
            _owner[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    number = _owner.get(report.nodeid)
    if number is None:
        return
    if report.failed:
        _results[number] = False
    elif report.when == "call" and report.passed and _results[number] is None:
        _results[number] = True


def pytest_terminal_summary(terminalreporter):
    if not _owner:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in _TITLES.items():
        state = _results[number]
        word = "NOT RUN" if state is None else ("PASS" if state else "FAIL")
        terminalreporter.write_line(f"criterion {number:2d} {word:7s} {title}")
