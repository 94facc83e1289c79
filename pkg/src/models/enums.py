# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Enumeration types for domain models."""

from enum import Enum


class StateLabel(str, Enum):
    """Hyperfine qubit state selecting a lattice potential."""

    ZERO = "0"
    ONE = "1"


class StepId(str, Enum):
    """Protocol step identifiers."""

    STEP1 = "step1"
    STEP2 = "step2"
    STEP3 = "step3"
    STEP4 = "step4"
    STEP5 = "step5"
    SPECTATOR = "spectator"


class RampDirection(str, Enum):
    """Direction of the aperture-trap intensity ramp."""

    OFF = "off"
    ON = "on"


class DepthNormalization(str, Enum):
    """How the diffraction intensity is mapped to the trap depth."""

    INCIDENT = "incident"
    PEAK = "peak"


class InteractionMethod(str, Enum):
    """How the single-well ground state for the collision phase is built."""

    SEPARABLE = "separable"
    GRID3D = "grid3d"


class Subcommand(str, Enum):
    """CLI subcommands."""

    UNITS = "units"
    POTENTIAL = "potential"
    GROUNDSTATE = "groundstate"
    STEP1 = "step1"
    STEP2 = "step2"
    SPECTATOR = "spectator"
    INTERACTION = "interaction"
    BUDGET = "budget"
    CAPACITY = "capacity"
    SWEEP = "sweep"
    GATE = "gate"


class SweepParameter(str, Enum):
    """Scalars that can be swept."""

    T_F = "T_F"
    T_OL = "T_OL"
    N = "n"
    V_0 = "V_0"
    U_0 = "U_0"
