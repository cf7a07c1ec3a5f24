import numpy as np
import pytest

from qgabor.field import Grid2, QField


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_field(grid: Grid2, rng) -> QField:
    return QField(grid, rng.standard_normal(grid.shape + (4,)))
