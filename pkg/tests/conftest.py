import numpy as np
import pytest

from fiprimes.sieve import MajorantParams


@pytest.fixture(scope="session")
def params_1e5() -> MajorantParams:
    return MajorantParams(x=10**5)


@pytest.fixture(scope="session")
def params_1e12() -> MajorantParams:
    return MajorantParams(x=10**12)


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
