import pytest

from hypoineq import groups


@pytest.fixture(scope="session")
def en1():
    return groups.from_id("R:1:1:euclidean")


@pytest.fixture(scope="session")
def en2():
    return groups.from_id("R:2:1,1:euclidean")


@pytest.fixture(scope="session")
def en3():
    return groups.from_id("R:3:1,1,1:euclidean")


@pytest.fixture(scope="session")
def kaplan():
    return groups.from_id("H:1:kaplan")
