import pytest

from modwave.dispersion import (
    bbm_symbol,
    boussinesq_symbol,
    fractional_symbol,
    whitham_symbol,
)


@pytest.fixture(scope="session")
def bbm():
    return bbm_symbol()


@pytest.fixture(scope="session")
def boussinesq():
    return boussinesq_symbol()


@pytest.fixture(scope="session")
def whitham():
    return whitham_symbol()


@pytest.fixture(scope="session")
def frac2():
    return fractional_symbol(2.0)


@pytest.fixture(scope="session")
def frac3():
    return fractional_symbol(3.0)
