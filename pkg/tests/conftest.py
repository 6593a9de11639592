import pytest

from rmflab.numtheory import shared_factor_table


@pytest.fixture(scope="session")
def table_1k():
    return shared_factor_table(1000)


@pytest.fixture(scope="session")
def table_10k():
    return shared_factor_table(10_000)


@pytest.fixture(scope="session")
def table_1m():
    return shared_factor_table(1_000_000)
