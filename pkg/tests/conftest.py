import pytest

from hyperfield.constructions import build_krasner, build_m7, build_sign


@pytest.fixture(scope="session")
def krasner():
    return build_krasner()


@pytest.fixture(scope="session")
def sign():
    return build_sign()


@pytest.fixture(scope="session")
def m7():
    return build_m7()


@pytest.fixture(scope="session")
def F7(m7):
    return m7.field


def els(F, *names):
    return frozenset(F.index(s) for s in names)
