import pytest
from hypothesis import settings

from exploitflow import Environment, load_scenario

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ur3():
    return load_scenario("ur3_ctf")


@pytest.fixture(scope="session")
def toy():
    return load_scenario("toy2")


@pytest.fixture
def ur3_env(ur3):
    return Environment(ur3)


@pytest.fixture
def toy_env(toy):
    return Environment(toy)


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
