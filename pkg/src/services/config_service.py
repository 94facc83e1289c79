# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Scenario files: parsing, canonical emission and conversion to model inputs."""

import dataclasses
import json
import logging
import tomllib
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError
from scipy import constants

from src.config import Settings
from src.errors import ConfigError
from src.models.params import LATTICE_MASS, PhysicalParams
from src.schemas.config import ScenarioConfig
from src.schemas.dynamics import GroundStateConfig, PropagatorConfig, SimulationConfig
from src.services.protocol_service import GateSetup
from src.services.units_service import derive_scaled_units

logger = logging.getLogger(__name__)

DEFAULT_TRAP_DEPTH_HZ = 1.03e6
DEFAULT_LATTICE_DEPTH_HZ = 1.47e5
DEFAULT_T_F_TAU = 42.5
DEFAULT_T_OL_TAU = 29.7


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate scenario TOML text.

    Raises:
        ConfigError: On malformed TOML (with line and column) or on a
            validation failure (naming the dotted key).
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(
            f"Malformed scenario file: {e}",
            line=getattr(e, "lineno", None),
            column=getattr(e, "colno", None),
        ) from e
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        if first["type"] == "extra_forbidden":
            message = f"Unknown key '{key}'"
        else:
            message = f"Invalid value for '{key}': {first['msg']}"
        raise ConfigError(message, key=key) from e


def load_config(path: Path | str) -> ScenarioConfig:
    """Read a scenario file; an empty file yields every default."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Scenario file not found: {path}")
    logger.debug(f"Loading scenario {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, list | tuple):
        return "[" + ", ".join(_format_value(item) for item in value) + "]"
    raise ConfigError(f"Cannot emit value of type {type(value).__name__}")


def dump_config(cfg: ScenarioConfig) -> str:
    """Canonical TOML text: fixed section and key order, unset keys omitted."""
    blocks = []
    for name in ScenarioConfig.model_fields:
        section: BaseModel = getattr(cfg, name)
        lines = [f"[{name}]"]
        for key, value in section.model_dump(mode="json").items():
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def replace_values(cfg: ScenarioConfig, values: dict[str, Any]) -> ScenarioConfig:
    """Return a validated copy with dotted keys set; None clears a key.

    Raises:
        ConfigError: If the new values fail validation (naming the dotted key).
    """
    data = cfg.model_dump()
    for dotted, value in values.items():
        section, key = dotted.split(".", 1)
        data[section][key] = value
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        message = f"Invalid override for '{key}': {first['msg']}"
        raise ConfigError(message, key=key) from e


def apply_overrides(cfg: ScenarioConfig, **overrides: Any) -> ScenarioConfig:
    """Return a validated copy with dotted-key overrides (``grid.points`` etc.).

    Overrides given as None are skipped.
    """
    return replace_values(
        cfg, {key: value for key, value in overrides.items() if value is not None}
    )


def build_params(cfg: ScenarioConfig) -> PhysicalParams:
    """Dimensional parameters with table defaults for everything unset."""
    aperture, lattice, atom = cfg.aperture, cfg.lattice, cfg.atom
    trap_wavelength = aperture.wavelength_nm * 1e-9
    lattice_wavelength = lattice.wavelength_nm * 1e-9
    base = PhysicalParams(
        aperture_radius=(
            aperture.radius_um * 1e-6
            if aperture.radius_um is not None
            else 1.5 * trap_wavelength
        ),
        trap_wavelength=trap_wavelength,
        trap_intensity=aperture.intensity_w_cm2 * 1e4,
        atomic_line=aperture.atomic_line_nm * 1e-9,
        trap_minimum=aperture.trap_minimum_um * 1e-6,
        lattice_wavelength=lattice_wavelength,
        waist=(
            lattice.waist_um * 1e-6
            if lattice.waist_um is not None
            else 4.0 * lattice_wavelength
        ),
        scattering_length=atom.scattering_length_nm * 1e-9,
        atomic_mass=atom.mass_amu * constants.atomic_mass,
        half_linewidth=aperture.half_linewidth,
    )
    recoil = derive_scaled_units(base).recoil_energy

    def depth(hz: float | None, er: float | None, default_hz: float) -> float:
        if er is not None:
            return er * recoil
        return constants.h * (hz if hz is not None else default_hz)

    return dataclasses.replace(
        base,
        trap_depth=depth(aperture.depth_hz, aperture.depth_er, DEFAULT_TRAP_DEPTH_HZ),
        lattice_depth=depth(
            lattice.depth_hz, lattice.depth_er, DEFAULT_LATTICE_DEPTH_HZ
        ),
    )


def build_setup(cfg: ScenarioConfig) -> GateSetup:
    """Scaled trap and lattice for a scenario."""
    return GateSetup.from_params(
        build_params(cfg),
        quadrature_order=cfg.aperture.quadrature_order,
        normalization=cfg.aperture.normalization,
    )


def build_simulation(cfg: ScenarioConfig, settings: Settings) -> SimulationConfig:
    """Solver settings of a scenario, with FFT threads from the environment."""
    prop, gs = cfg.propagator, cfg.ground_state
    return SimulationConfig(
        propagator=PropagatorConfig(
            dt=prop.dt_tau,
            trace_stride=prop.trace_stride,
            absorbing_mask=prop.absorbing_mask,
            mass=LATTICE_MASS,
            fft_workers=settings.fft_workers,
            max_norm_drift=prop.max_norm_drift,
        ),
        ground_state=GroundStateConfig(
            dt=gs.dt_tau,
            energy_tol=gs.energy_tol,
            max_iters=gs.max_iters,
            refinement_stages=gs.refinement_stages,
            residual_tol=gs.residual_tol,
            mass=LATTICE_MASS,
            fft_workers=settings.fft_workers,
        ),
    )


def ramp_time_tau(cfg: ScenarioConfig, setup: GateSetup) -> float:
    """T_F in units of tau."""
    schedule = cfg.schedule
    if schedule.T_F_ms is not None:
        return setup.units.time_to_scaled(schedule.T_F_ms * 1e-3)
    return schedule.T_F_tau if schedule.T_F_tau is not None else DEFAULT_T_F_TAU


def transport_time_tau(cfg: ScenarioConfig, setup: GateSetup) -> float:
    """T_OL in units of tau."""
    schedule = cfg.schedule
    if schedule.T_OL_ms is not None:
        return setup.units.time_to_scaled(schedule.T_OL_ms * 1e-3)
    return schedule.T_OL_tau if schedule.T_OL_tau is not None else DEFAULT_T_OL_TAU
