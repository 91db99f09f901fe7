import pytest

from latpoly.enumeration.ensembles import clear_cache


@pytest.fixture
def fresh_cache():
    clear_cache()
    yield
    clear_cache()


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
