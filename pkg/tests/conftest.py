import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _criteria.setdefault(num, {"title": title, "tests": {}})


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for num, entry in _criteria.items():
        if report.nodeid in entry["tests"] or _marked(report, num):
            entry["tests"][report.nodeid] = report.outcome


def _marked(report, num):
    for key, args in getattr(report, "user_properties", []):
        if key == "criterion" and args == num:
            return True
    return False


@pytest.fixture(autouse=True)
def _criterion_property(request):
    mark = request.node.get_closest_marker("criterion")
    if mark:
        request.node.user_properties.append(("criterion", mark.args[0]))
    yield


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        outcomes = list(entry["tests"].values())
        if not outcomes:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict:7s} {entry['title']} ({len(outcomes)} tests)")
