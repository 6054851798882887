import warnings

from hypothesis import HealthCheck, settings

# The sandbox this suite runs in has noisy timing, so per-example deadlines
# are disabled everywhere instead of being tuned test by test.
settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# httpx's TestClient integration emits a deprecation notice through starlette
# that we cannot act on from here; the matching pytest filter lives in
# pyproject.toml so it also covers collection-time imports.
warnings.filterwarnings("ignore", category=DeprecationWarning, module="starlette")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", []) if module else []
    if lines:
        terminalreporter.section("acceptance battery")
        for line in lines:
            terminalreporter.write_line(line)
