import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    number, name = int(m.group(1)), m.group(2).replace("_", " ")
    failed = report.failed
    if report.when == "call" or failed:
        prev = _results.get(number, ("PASS", name))[0]
        _results[number] = ("FAIL" if failed or prev == "FAIL" else "PASS" if report.passed else "SKIP", name)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        verdict, name = _results[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {name}")
