import numpy as np
import pytest

from qdel import kernels


@pytest.fixture(scope="session", autouse=True)
def _heap_reuse():
    # large sweeps allocate and drop one 64 MB matrix per deletion position
    kernels.enable_heap_reuse()


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)
