import os

from hypothesis import HealthCheck, settings

# fixed seed so property runs are reproducible; override with HYPOTHESIS_SEED
settings.register_profile(
    "default",
    derandomize="HYPOTHESIS_SEED" not in os.environ,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results, key=int):
            terminalreporter.write_line(results[key])
