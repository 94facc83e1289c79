# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Scenario file schema.

Absent keys take the parameter-table defaults. Keys that come in pairs
(``T_F_tau``/``T_F_ms``, ``depth_hz``/``depth_er``) accept at most one value.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.enums import (
    DepthNormalization,
    InteractionMethod,
    StateLabel,
    StepId,
    SweepParameter,
)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _at_most_one(model: BaseModel, first: str, second: str) -> None:
    if getattr(model, first) is not None and getattr(model, second) is not None:
        raise ValueError(f"Set either {first} or {second}, not both")


class ApertureSection(_Section):
    """Aperture trap: geometry, light and depth."""

    radius_um: float | None = Field(default=None, gt=0)
    wavelength_nm: float = Field(default=795.118, gt=0)
    atomic_line_nm: float = Field(default=794.979, gt=0)
    intensity_w_cm2: float = Field(default=2.5e5, gt=0)
    half_linewidth: float | None = Field(default=None, gt=0)
    trap_minimum_um: float = Field(default=1.7, gt=0)
    depth_hz: float | None = Field(default=None, ge=0)
    depth_er: float | None = Field(default=None, ge=0)
    quadrature_order: int = Field(default=64, ge=16)
    normalization: DepthNormalization = DepthNormalization.INCIDENT

    @model_validator(mode="after")
    def validate_depth(self) -> ApertureSection:
        """Validate that the depth is given in one unit only."""
        _at_most_one(self, "depth_hz", "depth_er")
        return self


class LatticeSection(_Section):
    """Optical lattice beam."""

    wavelength_nm: float = Field(default=785.0, gt=0)
    waist_um: float | None = Field(default=None, gt=0)
    depth_hz: float | None = Field(default=None, ge=0)
    depth_er: float | None = Field(default=None, ge=0)
    site_pitch_um: float = Field(default=10.0, gt=0)

    @model_validator(mode="after")
    def validate_depth(self) -> LatticeSection:
        """Validate that the depth is given in one unit only."""
        _at_most_one(self, "depth_hz", "depth_er")
        return self


class AtomSection(_Section):
    """Atomic species."""

    mass_amu: float = Field(default=86.909180527, gt=0)
    scattering_length_nm: float = Field(default=5.19, ge=0)


class GridSection(_Section):
    """Simulation grids in lattice wavelengths."""

    dim: int = Field(default=2, ge=1, le=3)
    points: int = Field(default=256, ge=8)
    half_width: float = Field(default=2.0, gt=0)
    z_min: float = Field(default=0.2, gt=0)
    z_max: float = Field(default=4.2, gt=0)
    transport_dim: int = Field(default=1, ge=1, le=3)
    transport_points: int = Field(default=2048, ge=8)
    transport_margin: float = Field(default=4.0, gt=0)
    transverse_points: int = Field(default=64, ge=8)

    @model_validator(mode="after")
    def validate_z_range(self) -> GridSection:
        """Validate the z window of the Step-1 grid."""
        if not self.z_max > self.z_min:
            raise ValueError("z_max must exceed z_min")
        return self


class PropagatorSection(_Section):
    """Real-time propagation."""

    dt_tau: float = Field(default=1e-3, gt=0)
    trace_stride: int = Field(default=10, ge=1)
    absorbing_mask: bool = False
    max_norm_drift: float = Field(default=1e-8, gt=0)
    check_convergence: bool = False


class GroundStateSection(_Section):
    """Imaginary-time relaxation."""

    dt_tau: float = Field(default=5e-3, gt=0)
    energy_tol: float = Field(default=1e-10, gt=0)
    max_iters: int = Field(default=200_000, ge=1)
    refinement_stages: int = Field(default=2, ge=1)
    residual_tol: float = Field(default=1e-2, gt=0)


class ScheduleSection(_Section):
    """Durations of the protocol steps and the transport count."""

    T_F_tau: float | None = Field(default=None, ge=0)
    T_F_ms: float | None = Field(default=None, ge=0)
    T_OL_tau: float | None = Field(default=None, ge=0)
    T_OL_ms: float | None = Field(default=None, ge=0)
    n: int = Field(default=6, ge=0)
    phase: float = Field(default=math.pi, ge=0)
    state: StateLabel = StateLabel.ONE
    atom_site_separation: int | None = Field(default=None, ge=0)
    fidelity_target: float = Field(default=0.99, ge=0, le=1)
    per_process_fidelity: float = Field(default=0.99, ge=0, le=1)
    use_achieved_fidelity: bool = False
    find_min_time: bool = False
    scan_step_tau: float = Field(default=0.5, gt=0)
    T_F_bracket_tau: tuple[float, float] = (10.0, 60.0)
    T_OL_bracket_tau: tuple[float, float] = (5.0, 40.0)

    @model_validator(mode="after")
    def validate_pairs(self) -> ScheduleSection:
        """Validate the time pairs and the search brackets."""
        _at_most_one(self, "T_F_tau", "T_F_ms")
        _at_most_one(self, "T_OL_tau", "T_OL_ms")
        for name in ("T_F_bracket_tau", "T_OL_bracket_tau"):
            low, high = getattr(self, name)
            if not 0 <= low < high:
                raise ValueError(f"{name} must satisfy 0 <= low < high")
        return self


class InteractionSection(_Section):
    """Collisional phase of Step 3."""

    method: InteractionMethod = InteractionMethod.SEPARABLE
    frequency_hz: float = Field(default=218.0, gt=0)
    use_computed_frequency: bool = False
    points: int | None = Field(default=None, ge=8)


class SweepSection(_Section):
    """Parameter sweep: either explicit values or start/stop/step."""

    parameter: SweepParameter = SweepParameter.T_F
    step: StepId | None = None
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    increment: float | None = Field(default=None, gt=0)
    jobs: int | None = Field(default=None, ge=1)

    @field_validator("step")
    @classmethod
    def validate_step(cls, v: StepId | None) -> StepId | None:
        """Validate that the swept step is a simulated one."""
        if v is not None and v not in (StepId.STEP1, StepId.STEP2, StepId.SPECTATOR):
            raise ValueError("Only step1, step2 and spectator can be swept")
        return v

    @model_validator(mode="after")
    def validate_range(self) -> SweepSection:
        """Validate that the range is given one way only."""
        ranged = (self.start, self.stop, self.increment)
        if self.values is not None and any(v is not None for v in ranged):
            raise ValueError("Give either values or start/stop/increment")
        if any(v is not None for v in ranged) and any(v is None for v in ranged):
            raise ValueError("start, stop and increment must be given together")
        return self

    def resolved_values(self) -> list[float]:
        """Sweep values in input order."""
        if self.values is not None:
            return list(self.values)
        if self.start is None or self.stop is None or self.increment is None:
            return []
        count = math.floor((self.stop - self.start) / self.increment + 1e-9)
        return [self.start + i * self.increment for i in range(max(count, -1) + 1)]

    def target_step(self) -> StepId:
        """Step simulated for each sweep point."""
        if self.step is not None:
            return self.step
        if self.parameter in (SweepParameter.T_OL, SweepParameter.N):
            return StepId.STEP2
        return StepId.STEP1


class OutputSection(_Section):
    """Output directory and optional artifacts."""

    directory: str | None = None
    name: str = "atomgate"
    plots: bool = False
    report: bool = False


class ScenarioConfig(_Section):
    """A complete scenario file."""

    aperture: ApertureSection = ApertureSection()
    lattice: LatticeSection = LatticeSection()
    atom: AtomSection = AtomSection()
    grid: GridSection = GridSection()
    propagator: PropagatorSection = PropagatorSection()
    ground_state: GroundStateSection = GroundStateSection()
    schedule: ScheduleSection = ScheduleSection()
    interaction: InteractionSection = InteractionSection()
    sweep: SweepSection = SweepSection()
    output: OutputSection = OutputSection()
