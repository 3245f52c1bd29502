import sys

from hypothesis import HealthCheck, settings

settings.register_profile("suq2", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suq2")


def pytest_terminal_summary(terminalreporter):
    # the acceptance lines are printed inside captured tests; repeat them here
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
