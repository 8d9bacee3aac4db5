import pytest

from support import load_algebra, sweep


@pytest.fixture(scope="session")
def worked():
    return load_algebra("worked_example.json")


@pytest.fixture(scope="session")
def small_sweep():
    """Every tense algebra with at most five elements; the full sweep goes to six."""
    return sweep(5)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
