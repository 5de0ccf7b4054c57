import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[str, tuple[str, str]] = {}
_NAME = re.compile(r"test_ac(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m:
        return
    key = f"AC{m.group(1)}"
    if report.when == "call" or report.outcome != "passed":
        prev = _CRITERIA.get(key, ("PASS", ""))[0]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _CRITERIA[key] = (status, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k[2:])):
        status, label = _CRITERIA[key]
        terminalreporter.write_line(f"{key} {status}: {label}")
