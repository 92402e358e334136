import pytest

from partition_bounds.exact_partition import build_table
from partition_bounds.numerics import PrecisionContext

ORACLE_N_MAX = 16000


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(256)


@pytest.fixture(scope="session")
def table():
    return build_table(ORACLE_N_MAX)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
