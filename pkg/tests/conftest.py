import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_FILE = "test_acceptance.py"

_acceptance_results: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        name = report.nodeid.split("::")[-1].split("[")[0]
        _acceptance_results.setdefault(name, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    write = terminalreporter.write_line
    write("")
    write("acceptance criteria:")
    for name, outcomes in _acceptance_results.items():
        if any(o == "failed" for o in outcomes):
            verdict = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        write(f"  {verdict}  {name}")
