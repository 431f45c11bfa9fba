import numpy as np
import pytest

from grtlab.finite_groups import group_from_spec
from grtlab.grt_ops import lie2
from grtlab.lie_core import bracket


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def xy():
    """Generators x, y of the free Lie algebra truncated at degree 5."""
    return lie2(5)


@pytest.fixture
def xy_bracket(xy):
    x, y = xy
    return bracket(x, y)


@pytest.fixture(params=["Z5", "S3"])
def small_group(request):
    return group_from_spec(request.param)


@pytest.fixture
def s3():
    return group_from_spec("S3")


@pytest.fixture
def z5():
    return group_from_spec("Z5")
