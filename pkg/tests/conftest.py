import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_acceptance_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = re.search(r"test_acceptance\.py::test_(criterion_\S+)", report.nodeid)
    if match:
        _acceptance_results[match.group(1)] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name in sorted(_acceptance_results):
        outcome = _acceptance_results[name].upper()
        label = name.replace("criterion_", "").replace("_", " ")
        terminalreporter.write_line(f"  {label}: {outcome}")
