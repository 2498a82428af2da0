import pytest

from app.geometry.builtins import builtin_mutations, example1, example2, example3


@pytest.fixture(autouse=True)
def _serial_pool(monkeypatch):
    monkeypatch.setenv("ISOGEO4_THREADS", "1")


@pytest.fixture(scope="session")
def ex1():
    return example1()


@pytest.fixture(scope="session")
def ex2():
    return example2()


@pytest.fixture(scope="session")
def ex3():
    return example3()


@pytest.fixture(scope="session")
def mutations():
    return {family.name: family for family in builtin_mutations()}
