import numpy as np
import pytest
from click.testing import CliRunner

from retrobohm.physics import Grid


@pytest.fixture
def grid() -> Grid:
    return Grid(-20.0, 20.0, 1024)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
