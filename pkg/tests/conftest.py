import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from model.geometry import ModelParams  # noqa: E402
from model.sampler import sample  # noqa: E402


@pytest.fixture
def small_params():
    return ModelParams(alpha=0.75, nu=1.0, n=1500, seed=11)


@pytest.fixture
def small_points(small_params):
    return sample(small_params)


@pytest.fixture
def audit_params():
    """Large enough that the lower-bound regions exist (R >= 10)."""
    return ModelParams(alpha=0.7, nu=1.0, n=2e4, seed=5)
