import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lcscohom.catalog import builtin  # noqa: E402


@pytest.fixture(scope="session")
def rh3():
    return builtin("rh3")


@pytest.fixture(scope="session")
def d4():
    return builtin("d4")


@pytest.fixture(scope="session")
def ot21():
    return builtin("ot21")


@pytest.fixture(scope="session")
def entries(rh3, d4, ot21):
    return [rh3, d4, ot21]


_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[name] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        outcome, detail = _CRITERIA[name]
        num = name.split("_")[2]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  {name[len('test_criterion_' + num + '_'):]}"
                                    + (f"  ({detail})" if detail else ""))
