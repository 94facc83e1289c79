# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
import os
from pathlib import Path

import numpy as np
import pytest

# Keep test output out of the working directory before settings load
os.environ.setdefault("ATOMGATE_OUTPUT_DIR", "./test-results")

from src.models.grid import Grid
from src.models.params import PhysicalParams
from src.schemas.dynamics import GroundStateConfig, PropagatorConfig, SimulationConfig
from src.services.protocol_service import GateSetup


@pytest.fixture(scope="session")
def setup() -> GateSetup:
    """Gate setup with the default parameter table."""
    return GateSetup.from_params(PhysicalParams())


@pytest.fixture
def line_grid() -> Grid:
    """Wide 1-D grid for harmonic and free-particle checks."""
    return Grid.build({"x": (-10.0, 10.0)}, 128)


@pytest.fixture
def harmonic_potential(line_grid: Grid) -> np.ndarray:
    """V = x^2 / 2 on the line grid (unit mass and frequency)."""
    x, _, _ = line_grid.cartesian()
    return 0.5 * x**2


@pytest.fixture
def unit_mass_ground_state() -> GroundStateConfig:
    """Relaxation settings for hbar = m = 1 test problems."""
    return GroundStateConfig(mass=1.0)


@pytest.fixture
def unit_mass_propagator() -> PropagatorConfig:
    """Propagation settings for hbar = m = 1 test problems."""
    return PropagatorConfig(dt=1e-3, mass=1.0)


@pytest.fixture(scope="session")
def coarse_simulation() -> SimulationConfig:
    """Lattice-unit solver settings with a coarse real-time step."""
    return SimulationConfig(propagator=PropagatorConfig(dt=5e-3))


@pytest.fixture
def scenario_file(tmp_path: Path):
    """Write scenario TOML text to a file and return its path."""

    def _write(text: str, name: str = "scenario.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
