import pytest

# criterion number -> {"title", "failures", "checks"}
_CRITERIA: dict[int, dict] = {}


def _entry(number, title):
    return _CRITERIA.setdefault(number, {"title": title, "failures": [], "checks": 0})


class CriterionReport:
    """Collects the checks one test performs for a numbered criterion."""

    def __init__(self, number, title):
        self.entry = _entry(number, title)
        self.failures = []

    def check(self, ok, message):
        self.entry["checks"] += 1
        if not ok:
            self.entry["failures"].append(message)
            self.failures.append(message)
        return ok


@pytest.fixture
def criterion(request):
    return CriterionReport(*request.node.get_closest_marker("criterion").args)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test reports to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" or call.excinfo is None:
        return
    report = item.funcargs.get("criterion")
    # an exception the test did not record as a check still fails the criterion
    if report is None or not report.failures:
        _entry(*marker.args)["failures"].append(f"{item.name}: {call.excinfo.typename}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        nfail = len(e["failures"])
        status = "FAIL" if nfail else "PASS"
        detail = f"{e['checks']} checks, {nfail} failed" if nfail else f"{e['checks']} checks"
        terminalreporter.write_line(f"criterion {number} {status}: {e['title']} ({detail})")
        for msg in e["failures"][:5]:
            terminalreporter.write_line(f"    {msg}")
