import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, with the recorded detail."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call" and outcome != "error":
                continue
            name = nodeid.split("::")[-1][len("test_criterion_"):]
            detail = dict(getattr(rep, "user_properties", [])).get("detail", "")
            rows.append((name, "PASS" if outcome == "passed" else "FAIL", detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in sorted(rows):
        num, _, title = name.partition("_")
        terminalreporter.write_line(f"criterion {int(num):2d} {verdict}  {title.replace('_', ' ')}: {detail}")
