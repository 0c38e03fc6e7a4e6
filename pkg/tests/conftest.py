"""Shared test wiring: collects acceptance-criterion outcomes and prints one
pass/fail line per criterion at the end of the run.  Parametrized variants
fold into their criterion; a criterion passes only if every variant did."""

_acceptance: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1].split("[")[0]
        ok = report.outcome == "passed"
        _acceptance[name] = _acceptance.get(name, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance):
        verdict = "PASS" if _acceptance[name] else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
