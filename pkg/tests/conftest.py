import pytest

from ahmedtype.numeric import FAST, PrecisionConfig


@pytest.fixture(scope="session")
def fast_cfg():
    return FAST


@pytest.fixture(scope="session")
def high_cfg():
    return PrecisionConfig(50)
