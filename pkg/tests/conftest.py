import pytest

from pgl3q2.hermitian import lattice_L, lattice_M, lattice_O3


@pytest.fixture(scope="session")
def latL():
    return lattice_L()


@pytest.fixture(scope="session")
def latM():
    return lattice_M()


@pytest.fixture(scope="session")
def latO3():
    return lattice_O3()


@pytest.fixture(scope="session")
def isomL(latL):
    return latL.isometry_group()


@pytest.fixture(scope="session")
def isomM(latM):
    return latM.isometry_group()
