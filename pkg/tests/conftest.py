"""Shared pytest plumbing: the acceptance-criteria summary lines.

Each acceptance test records a one-line result message; this hook prints
exactly one ``ACCEPTANCE <k>: PASS/FAIL`` line per criterion at the end of
the run, whether or not output capture is active.
"""

import re

ACCEPTANCE_MESSAGES: dict[int, str] = {}
_OUTCOMES: dict[int, str] = {}

_PATTERN = re.compile(r"test_acceptance_(\d+)")


def record_acceptance(criterion: int, message: str) -> None:
    ACCEPTANCE_MESSAGES[criterion] = message


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    _OUTCOMES[k] = "PASS" if report.outcome == "passed" else "FAIL"
    if report.outcome != "passed" and k not in ACCEPTANCE_MESSAGES:
        first = (report.longreprtext or "assertion failed").strip().splitlines()
        ACCEPTANCE_MESSAGES[k] = first[-1][:160] if first else "assertion failed"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.write_line("")
    for k in sorted(_OUTCOMES):
        msg = ACCEPTANCE_MESSAGES.get(k, "")
        line = f"ACCEPTANCE {k}: {_OUTCOMES[k]}"
        if msg:
            line += f" - {msg}"
        terminalreporter.write_line(line)
