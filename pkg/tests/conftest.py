import pytest

from knowhow.corpus import load_fixture


@pytest.fixture(scope="session")
def fixtures():
    return {f"T{i}": load_fixture(f"T{i}").model() for i in range(1, 9)}


@pytest.fixture(scope="session")
def T1(fixtures):
    return fixtures["T1"]
