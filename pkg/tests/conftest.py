from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import jostlab as jl


@pytest.fixture(scope="session")
def grid():
    return jl.DEFAULT_GRID


@pytest.fixture(scope="session")
def square_well(grid):
    return jl.build_potential(
        jl.PotentialSpec("square_well", {"depth": 1.0, "halfwidth": 1.0}), grid)


@pytest.fixture(scope="session")
def poschl_teller(grid):
    return jl.build_potential(
        jl.PotentialSpec("poschl_teller", {"strength": 1}), grid)


@pytest.fixture(scope="session")
def gaussian_well(grid):
    return jl.build_potential(
        jl.PotentialSpec("gaussian_well", {"depth": 1.0, "width": 1.0}), grid)


@pytest.fixture(scope="session")
def zero_potential(grid):
    return jl.build_potential(jl.PotentialSpec("zero", {}), grid)


@pytest.fixture(scope="session")
def pt_report(poschl_teller):
    return jl.detect_resonance(poschl_teller)


@pytest.fixture(scope="session")
def shifted_gaussian(grid):
    x = grid.nodes()
    return np.exp(-(x - 2.0) ** 2 / 2.0).astype(complex)
