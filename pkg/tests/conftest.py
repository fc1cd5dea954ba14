import pytest

from framecert import build_catalog


@pytest.fixture(scope="session")
def catalog():
    return build_catalog()
