import pytest

from borwein_ap.borwein import BorweinParams

ACCEPTANCE_RESULTS = []


@pytest.fixture
def record_acceptance():
    def record(label, passed, detail=""):
        ACCEPTANCE_RESULTS.append((label, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f"  ({detail})" if detail else ""))


SMALL_PARAMS = [BorweinParams(p, s, n) for p in (3, 5, 7) for s in (1, 2, 3) for n in (1, 2, 3)]
