# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Pydantic schemas package."""

from src.schemas.config import (
    ApertureSection,
    AtomSection,
    GridSection,
    GroundStateSection,
    InteractionSection,
    LatticeSection,
    OutputSection,
    PropagatorSection,
    ScenarioConfig,
    ScheduleSection,
    SweepSection,
)
from src.schemas.dynamics import GroundStateConfig, PropagatorConfig, SimulationConfig
from src.schemas.results import (
    ArrayCapacity,
    ConvergenceReport,
    GateBudget,
    InteractionReport,
    ManifestFile,
    RunManifest,
    StepResult,
)

__all__ = [
    # Scenario file
    "ApertureSection",
    "AtomSection",
    "GridSection",
    "GroundStateSection",
    "InteractionSection",
    "LatticeSection",
    "OutputSection",
    "PropagatorSection",
    "ScenarioConfig",
    "ScheduleSection",
    "SweepSection",
    # Solvers
    "GroundStateConfig",
    "PropagatorConfig",
    "SimulationConfig",
    # Results
    "ArrayCapacity",
    "ConvergenceReport",
    "GateBudget",
    "InteractionReport",
    "ManifestFile",
    "RunManifest",
    "StepResult",
]
