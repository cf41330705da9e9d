"""Terminal summary: one CRITERION line per numbered acceptance test."""

import re

_ACCEPT = re.compile(r"test_acceptance\.py::test_(\d{2})_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status, word in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            m = _ACCEPT.search(getattr(rep, "nodeid", ""))
            if m:
                outcomes[int(m.group(1))] = word
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for k in sorted(outcomes):
            terminalreporter.write_line(f"CRITERION {k} {outcomes[k]}")
