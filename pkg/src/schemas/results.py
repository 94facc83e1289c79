# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Result schemas of protocol steps, budgets and runs."""

import math

from pydantic import BaseModel, Field, field_validator, model_validator

from src.models.enums import StateLabel, StepId, Subcommand


class StepResult(BaseModel):
    """Fidelity trace and outcome of one protocol step."""

    step: StepId
    state_label: StateLabel | None = None
    duration_tau: float = Field(..., ge=0)
    fidelity_trace: list[tuple[float, float]]
    achieved_fidelity: float = Field(..., ge=0, le=1)
    norm_drift: float = Field(default=0.0, ge=0)
    parameters: dict[str, float] = Field(default_factory=dict)

    @field_validator("fidelity_trace")
    @classmethod
    def validate_trace(
        cls, v: list[tuple[float, float]]
    ) -> list[tuple[float, float]]:
        """Validate that trace times increase and fidelities lie in [0, 1]."""
        times = [t for t, _ in v]
        if any(b <= a for a, b in zip(times, times[1:], strict=False)):
            raise ValueError("Trace times must be strictly increasing")
        if any(not 0.0 <= f <= 1.0 for _, f in v):
            raise ValueError("Fidelities must lie in [0, 1]")
        return v


class InteractionReport(BaseModel):
    """Collisional energy, its frequency and the hold time for a phase."""

    interaction_ratio: float = Field(..., ge=0)
    frequency_hz: float = Field(..., gt=0)
    hold_time_s: float = Field(..., ge=0)
    hold_time_tau: float = Field(..., ge=0)
    phase: float = math.pi
    frequency_supplied: bool = False

    @model_validator(mode="after")
    def validate_phase(self) -> InteractionReport:
        """Validate that 2 pi nu t_hold reproduces the phase."""
        accumulated = 2.0 * math.pi * self.frequency_hz * self.hold_time_s
        if abs(accumulated - self.phase) > 1e-12 * max(1.0, abs(self.phase)):
            raise ValueError("Hold time does not accumulate the requested phase")
        return self


class GateBudget(BaseModel):
    """Overall execution time 2 (T_F + T_OL) + t_hold and fidelity f^8 (seconds)."""

    t_f: float = Field(..., ge=0)
    t_ol: float = Field(..., ge=0)
    t_hold: float = Field(..., ge=0)
    per_process_fidelity: float = Field(..., ge=0, le=1)
    total_time: float = Field(..., ge=0)
    overall_fidelity: float = Field(..., ge=0, le=1)
    previous_proposal_fidelity: float = Field(..., ge=0, le=1)


class ArrayCapacity(BaseModel):
    """Usable lattice span and the number of aperture sites it holds."""

    rayleigh_length: float = Field(..., gt=0)
    usable_length: float = Field(..., gt=0)
    site_pitch: float = Field(..., gt=0)
    qubit_count: int = Field(..., ge=0)


class ConvergenceReport(BaseModel):
    """Change of a final fidelity under time-step and grid refinement."""

    dt: float
    fidelity: float
    refined_fidelity: float
    dt_delta: float
    grid_delta: float | None = None
    threshold: float
    passed: bool


class ManifestFile(BaseModel):
    """One output file and its checksum."""

    path: str
    sha256: str
    size_bytes: int


class RunManifest(BaseModel):
    """Record of one CLI run."""

    subcommand: Subcommand
    version: str
    config_sha256: str
    created_at: str
    files: list[ManifestFile]
