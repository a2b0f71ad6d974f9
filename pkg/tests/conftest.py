import pytest

from boxatom import CoulombTable


@pytest.fixture(scope="session")
def table():
    """Shared integral table so expensive quadrature caches warm up once."""
    return CoulombTable(points=200)
