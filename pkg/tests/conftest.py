import sys
from pathlib import Path

import numpy as np
import pytest

# Make the repository root importable (wgeo package and cli module)
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from wgeo.config import settings  # noqa: E402
from wgeo.pairs import Operator  # noqa: E402
from wgeo.space import build_l1, build_linf, build_regular_polygon, parse_space_name  # noqa: E402

ACCEPTANCE_SPACES = ["l1:2", "linf:2", "l1:3", "linf:3", "poly:6"]


@pytest.fixture(autouse=True)
def restore_settings():
    """CLI flags such as --tol mutate the global settings; put them back."""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def l1_2():
    return build_l1(2)


@pytest.fixture
def l1_2_exact():
    return build_l1(2, exact=True)


@pytest.fixture
def linf_2():
    return build_linf(2)


@pytest.fixture
def linf_3():
    return build_linf(3)


@pytest.fixture
def hexagon():
    return build_regular_polygon(6)


@pytest.fixture(scope="session")
def acceptance_spaces():
    return {name: parse_space_name(name) for name in ACCEPTANCE_SPACES}


def random_operator(space, rng, scale=3.0):
    return Operator.from_matrix(space, rng.uniform(-scale, scale, size=(space.dim, space.dim)))


def random_basis(space, rng, n, scale=3.0):
    return [rng.uniform(-scale, scale, size=(space.dim, space.dim)) for _ in range(n)]


def rational_matrix(rng, dim, low=-3, high=3):
    """Small-integer matrix, exactly representable in both modes."""
    return rng.integers(low, high + 1, size=(dim, dim))
