import re

import pytest

from pvvi import builtin_problem, run_sweep


@pytest.fixture(scope="session")
def po_problem():
    return builtin_problem("po")


@pytest.fixture(scope="session")
def vop_problem():
    return builtin_problem("vop")


# Session-wide sweeps at the golden settings; the 400-point grid on the
# constrained example dominates suite runtime, so it is computed once.
@pytest.fixture(scope="session")
def po_graph_400(po_problem):
    return run_sweep(po_problem, 400)


@pytest.fixture(scope="session")
def vop_graph_400(vop_problem):
    return run_sweep(vop_problem, 400)


_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" not in getattr(report, "nodeid", ""):
                continue
            match = _CRITERION.search(report.nodeid)
            if not match:
                continue
            num = int(match.group(1))
            verdict = "PASS" if status == "passed" else "FAIL"
            lines[num] = f"criterion {num:2d}: {verdict}"
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
