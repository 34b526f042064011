"""Shared pytest wiring.

The terminal-summary hook prints one PASS/FAIL line per acceptance
criterion at the end of a run, so the acceptance verdicts stay visible even
with output capture on.
"""

_ACCEPTANCE_FILE = "test_acceptance.py"


def _criterion_label(nodeid: str) -> str:
    name = nodeid.split("::")[-1]
    return name.removeprefix("test_").replace("_", " ")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    stats = terminalreporter.stats
    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for report in stats.get(status, []):
            if _ACCEPTANCE_FILE not in report.nodeid:
                continue
            if status == "passed" and report.when != "call":
                continue
            # Any failing phase (setup/call/teardown) marks the criterion failed.
            current = outcomes.get(report.nodeid)
            outcomes[report.nodeid] = (
                "FAIL" if status in ("failed", "error") else current or "PASS"
            )
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(outcomes):
        terminalreporter.write_line(f"{outcomes[nodeid]}  {_criterion_label(nodeid)}")
