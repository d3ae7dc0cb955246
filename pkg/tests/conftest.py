import pytest

from mubkit import PrimeDim, build_complete_mub, enumerate_partitions


@pytest.fixture(scope="session")
def mub4():
    return build_complete_mub(PrimeDim(2, 2), seed=0)


@pytest.fixture(scope="session")
def mub8():
    return build_complete_mub(PrimeDim(2, 3), seed=0)


@pytest.fixture(scope="session")
def mub9():
    return build_complete_mub(PrimeDim(3, 2), seed=0)


@pytest.fixture(scope="session")
def census23():
    return enumerate_partitions(PrimeDim(2, 3))
