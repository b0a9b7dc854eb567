import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, label = RESULTS[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {label}")
