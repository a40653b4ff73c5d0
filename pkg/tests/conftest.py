import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.addinivalue_line("markers", "slow: takes tens of seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or report.failed:
        number, title = marker.args
        ok = report.passed and _RESULTS.get(number, True)
        _RESULTS[number] = ok
        _RESULTS.setdefault("titles", {})[number] = title


def pytest_terminal_summary(terminalreporter):
    titles = _RESULTS.get("titles")
    if not titles:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(titles):
        status = "PASS" if _RESULTS[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {titles[number]}")
