# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Domain model package."""

from src.models.enums import (
    DepthNormalization,
    InteractionMethod,
    RampDirection,
    StateLabel,
    StepId,
    Subcommand,
    SweepParameter,
)
from src.models.evolution import EvolutionResult
from src.models.gate import TwoQubitGate
from src.models.grid import Axis, Grid, Wavefunction
from src.models.params import LATTICE_MASS, PhysicalParams, ScaledUnits
from src.models.potential import ApertureSpec, LatticeSpec, NFFDField
from src.models.schedule import GateSchedule, RampSchedule, ThetaSchedule

__all__ = [
    "LATTICE_MASS",
    "ApertureSpec",
    "Axis",
    "DepthNormalization",
    "EvolutionResult",
    "GateSchedule",
    "Grid",
    "InteractionMethod",
    "LatticeSpec",
    "NFFDField",
    "PhysicalParams",
    "RampDirection",
    "RampSchedule",
    "ScaledUnits",
    "StateLabel",
    "StepId",
    "Subcommand",
    "SweepParameter",
    "ThetaSchedule",
    "TwoQubitGate",
    "Wavefunction",
]
