# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Solver settings for ground-state relaxation and real-time propagation."""

from pydantic import BaseModel, ConfigDict, Field

from src.models.params import LATTICE_MASS


class PropagatorConfig(BaseModel):
    """Second-order split-operator propagation settings (times in tau)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(default=1e-3, gt=0)
    trace_stride: int = Field(default=10, ge=1)
    absorbing_mask: bool = False
    mass: float = Field(default=LATTICE_MASS, gt=0)
    fft_workers: int = Field(default=1, ge=1)
    max_norm_drift: float = Field(default=1e-8, gt=0)


class GroundStateConfig(BaseModel):
    """Imaginary-time relaxation settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dt: float = Field(default=5e-3, gt=0)
    energy_tol: float = Field(default=1e-10, gt=0)
    max_iters: int = Field(default=200_000, ge=1)
    check_every: int = Field(default=10, ge=1)
    refinement_stages: int = Field(default=2, ge=1)
    residual_tol: float = Field(default=1e-2, gt=0)
    mass: float = Field(default=LATTICE_MASS, gt=0)
    fft_workers: int = Field(default=1, ge=1)


class SimulationConfig(BaseModel):
    """Solver settings shared by every protocol step."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    propagator: PropagatorConfig = PropagatorConfig()
    ground_state: GroundStateConfig = GroundStateConfig()
