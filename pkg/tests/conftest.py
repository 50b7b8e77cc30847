import numpy as np
import pytest

from polyvol.catalog import catalog_build, catalog_entry


@pytest.fixture(scope="session")
def entries():
    return catalog_build(verify=True)


@pytest.fixture(scope="session")
def tet_small():
    return catalog_entry("tet_small").realization


@pytest.fixture(scope="session")
def tet_medium():
    return catalog_entry("tet_medium").realization


@pytest.fixture(scope="session")
def cube():
    return catalog_entry("cube").realization


@pytest.fixture(scope="session")
def prism():
    return catalog_entry("prism").realization


@pytest.fixture(scope="session")
def cube_diagonal():
    return catalog_entry("cube_diagonal").realization


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
