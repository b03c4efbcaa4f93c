import pytest

from nhlab.models import ModelParams


@pytest.fixture
def jb():
    return ModelParams("JordanBound", alpha=1.0, z=1j)


@pytest.fixture
def tl():
    return ModelParams("TwoLevel", alpha=1.0, beta=0.3, z=1j)


@pytest.fixture
def th():
    return ModelParams("Threshold", n=1, z=1j)


@pytest.fixture
def th3():
    return ModelParams("Threshold", n=3, z=1j)


@pytest.fixture
def cbs():
    return ModelParams("ContinuumBS", alpha=0.5, z=1j)
