# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""The five-step gate: trap switch-off, transport, hold, return and switch-on.

All quantities below are in scaled units (lengths in lattice wavelengths,
energies in recoil energies, times in tau) unless a name says otherwise.
"""

import functools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.signal import find_peaks

from src.errors import (
    InvalidParameterError,
    TargetNotReachedError,
    TransportDomainError,
)
from src.models.enums import (
    DepthNormalization,
    InteractionMethod,
    RampDirection,
    StateLabel,
    StepId,
)
from src.models.evolution import EvolutionResult
from src.models.grid import Grid, Wavefunction
from src.models.params import PhysicalParams, ScaledUnits
from src.models.potential import ApertureSpec, LatticeSpec
from src.models.schedule import GateSchedule, RampSchedule, ThetaSchedule
from src.schemas.dynamics import GroundStateConfig, SimulationConfig
from src.schemas.results import GateBudget, InteractionReport, StepResult
from src.services import budget_service, dynamics_service, interaction_service
from src.services.potential_service import (
    MovingLatticeTerm,
    RampedTerm,
    StaticTerm,
    TimeDependentPotential,
    compose,
    isolate_well,
    lattice_potential,
    nffd_field,
    state_potential,
)
from src.services.units_service import derive_scaled_units
from src.services.wavefunction_service import translate

logger = logging.getLogger(__name__)

DEFAULT_TARGET = 0.99
DEFAULT_SCAN_STEP = 0.5
DIP_PROMINENCE = 1e-4
DIP_RELATIVE_DEPTH = 0.25


@dataclass(frozen=True)
class GateSetup:
    """Aperture trap and lattice in scaled units, with their unit system."""

    units: ScaledUnits
    aperture: ApertureSpec
    lattice: LatticeSpec

    @classmethod
    def from_params(
        cls,
        params: PhysicalParams,
        quadrature_order: int = 64,
        normalization: DepthNormalization = DepthNormalization.INCIDENT,
    ) -> GateSetup:
        """Convert dimensional parameters to the scaled trap and lattice."""
        units = derive_scaled_units(params)
        aperture = ApertureSpec(
            radius=units.length_to_scaled(params.aperture_radius),
            wavelength=units.length_to_scaled(params.trap_wavelength),
            depth=units.energy_to_scaled(params.trap_depth),
            quadrature_order=quadrature_order,
            normalization=normalization,
        )
        lattice = LatticeSpec(
            depth=units.energy_to_scaled(params.lattice_depth),
            wavelength=1.0,
            waist=units.length_to_scaled(params.waist),
            center=units.length_to_scaled(params.trap_minimum),
        )
        return cls(units=units, aperture=aperture, lattice=lattice)

    @property
    def well_half_width(self) -> float:
        """Half the lattice constant: the extent of one well."""
        return 0.5 * self.lattice.lattice_constant


@dataclass(frozen=True)
class GateRun:
    """Every step of one gate execution and the resulting budget."""

    steps: tuple[StepResult, ...]
    interaction: InteractionReport
    budget: GateBudget


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


def step1_grid(
    setup: GateSetup,
    points: int = 256,
    dim: int = 2,
    half_width: float = 2.0,
    z_range: tuple[float, float] = (0.2, 4.2),
) -> Grid:
    """Grid around the aperture: x (1-D), (x, z) (2-D) or (x, y, z) (3-D)."""
    if dim not in (1, 2, 3):
        raise InvalidParameterError("dim must be 1, 2 or 3")
    if z_range[0] <= 0:
        raise InvalidParameterError("The Step-1 grid must stay above the aperture")
    extents: dict[str, tuple[float, float]] = {"x": (-half_width, half_width)}
    if dim == 3:
        extents["y"] = (-half_width, half_width)
    if dim >= 2:
        extents["z"] = z_range
    return Grid.build(extents, points, anchor=(0.0, 0.0, setup.lattice.center))


def transport_grid(
    setup: GateSetup,
    n: int,
    points: int = 2048,
    margin: float = 4.0,
    dim: int = 1,
    transverse_points: int = 64,
    transverse_half_width: float = 2.0,
) -> Grid:
    """Grid along the lattice spanning +-(n lambda / 2 + margin) in x."""
    if dim not in (1, 2, 3):
        raise InvalidParameterError("dim must be 1, 2 or 3")
    half = 0.5 * n * setup.lattice.wavelength + margin
    center = setup.lattice.center
    extents: dict[str, tuple[float, float]] = {"x": (-half, half)}
    counts = {"x": points, "y": transverse_points, "z": transverse_points}
    if dim == 3:
        extents["y"] = (-transverse_half_width, transverse_half_width)
    if dim >= 2:
        lower = max(center - transverse_half_width, 0.05)
        extents["z"] = (lower, center + transverse_half_width)
    return Grid.build(extents, counts, anchor=(0.0, 0.0, center))


def _require_transport_room(grid: Grid, distance: float, setup: GateSetup) -> None:
    axis = grid.axis("x")
    room = min(abs(axis.lower), abs(axis.upper)) * (1.0 - 0.1)
    needed = abs(distance) + setup.well_half_width
    if needed > room:
        raise TransportDomainError(
            f"Transport by {distance:g} lattice wavelengths does not fit in "
            f"[{axis.lower:g}, {axis.upper:g}]"
        )


# ---------------------------------------------------------------------------
# Reference states
# ---------------------------------------------------------------------------


@functools.cache
def combined_ground_state(
    setup: GateSetup, grid: Grid, cfg: GroundStateConfig
) -> tuple[Wavefunction, float]:
    """Ground state of lattice plus aperture trap."""
    potential = lattice_potential(setup.lattice, grid) + nffd_field(
        setup.aperture, grid
    ).potential
    return dynamics_service.ground_state(potential, grid, cfg)


@functools.cache
def lattice_ground_state(
    setup: GateSetup, grid: Grid, cfg: GroundStateConfig, center: float = 0.0
) -> tuple[Wavefunction, float]:
    """Ground state of the lattice well at x = center."""
    walled = isolate_well(
        lattice_potential(setup.lattice, grid), grid, center, setup.well_half_width
    )
    return dynamics_service.ground_state(walled, grid, cfg)


@functools.cache
def spectator_ground_state(
    setup: GateSetup, grid: Grid, cfg: GroundStateConfig, label: StateLabel
) -> tuple[Wavefunction, float]:
    """Ground state of the aperture trap plus the unshifted state lattice."""
    potential = (
        state_potential(setup.lattice, 0.0, grid, label)
        + nffd_field(setup.aperture, grid).potential
    )
    return dynamics_service.ground_state(potential, grid, cfg)


def transport_shift(setup: GateSetup, n: int, label: StateLabel) -> float:
    """Displacement of the dominant well after theta = n pi."""
    sign = 1.0 if label == StateLabel.ONE else -1.0
    return sign * n * setup.lattice.lattice_constant


def transport_states(
    setup: GateSetup, grid: Grid, cfg: GroundStateConfig, n: int, label: StateLabel
) -> tuple[Wavefunction, Wavefunction]:
    """Initial well ground state and its copy in the well reached after transport."""
    shift = transport_shift(setup, n, label)
    _require_transport_room(grid, shift, setup)
    initial, _ = lattice_ground_state(setup, grid, cfg)
    return initial, translate(initial, shift)


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------


def _step_result(
    step: StepId,
    duration: float,
    evolution: EvolutionResult,
    label: StateLabel | None = None,
    **parameters: float,
) -> StepResult:
    achieved = evolution.final_fidelity
    result = StepResult(
        step=step,
        state_label=label,
        duration_tau=duration,
        fidelity_trace=list(evolution.fidelity_trace),
        achieved_fidelity=achieved if achieved is not None else 0.0,
        norm_drift=evolution.norm_drift,
        parameters={"duration_tau": duration, **parameters},
    )
    logger.info(
        f"{step.value}"
        + (f" |{label.value}>" if label is not None else "")
        + f": T = {duration:g} tau, F = {result.achieved_fidelity:.6f}"
    )
    return result


def _trap_ramp(
    setup: GateSetup, grid: Grid, duration: float, direction: RampDirection
) -> TimeDependentPotential:
    trap = nffd_field(setup.aperture, grid).potential
    return compose(
        StaticTerm(grid, lattice_potential(setup.lattice, grid)),
        RampedTerm(grid, trap, RampSchedule(duration, direction)),
    )


def run_step1(
    setup: GateSetup, grid: Grid, cfg: SimulationConfig, t_f: float
) -> StepResult:
    """Switch the aperture trap off over T_F, leaving the atom in the lattice.

    The atom starts in the ground state of lattice plus trap; the fidelity is
    taken against the ground state of the lattice well alone.
    """
    initial, _ = combined_ground_state(setup, grid, cfg.ground_state)
    target, _ = lattice_ground_state(setup, grid, cfg.ground_state)
    potential = _trap_ramp(setup, grid, t_f, RampDirection.OFF)
    evolution = dynamics_service.propagate(
        initial, potential, t_f, cfg.propagator, reference=target
    )
    return _step_result(StepId.STEP1, t_f, evolution)


def run_step5(
    setup: GateSetup, grid: Grid, cfg: SimulationConfig, t_f: float
) -> StepResult:
    """Switch the aperture trap back on over T_F with a sin^2 ramp."""
    initial, _ = lattice_ground_state(setup, grid, cfg.ground_state)
    target, _ = combined_ground_state(setup, grid, cfg.ground_state)
    potential = _trap_ramp(setup, grid, t_f, RampDirection.ON)
    evolution = dynamics_service.propagate(
        initial, potential, t_f, cfg.propagator, reference=target
    )
    return _step_result(StepId.STEP5, t_f, evolution)


def _run_transport(
    setup: GateSetup,
    grid: Grid,
    cfg: SimulationConfig,
    t_ol: float,
    n: int,
    label: StateLabel,
    reverse: bool,
) -> StepResult:
    start, moved = transport_states(setup, grid, cfg.ground_state, n, label)
    initial, target = (moved, start) if reverse else (start, moved)
    term = MovingLatticeTerm(
        grid, setup.lattice, ThetaSchedule(n, t_ol, reverse=reverse), label
    )
    evolution = dynamics_service.propagate(
        initial, compose(term), t_ol, cfg.propagator, reference=target
    )
    step = StepId.STEP4 if reverse else StepId.STEP2
    return _step_result(step, t_ol, evolution, label, n=float(n))


def run_step2(
    setup: GateSetup,
    grid: Grid,
    cfg: SimulationConfig,
    t_ol: float,
    n: int,
    label: StateLabel,
) -> StepResult:
    """Move one qubit state by n lattice sites with theta(t) from 0 to n pi.

    Raises:
        TransportDomainError: If the destination well lies too close to the
            grid edge.
    """
    return _run_transport(setup, grid, cfg, t_ol, n, label, reverse=False)


def run_step4(
    setup: GateSetup,
    grid: Grid,
    cfg: SimulationConfig,
    t_ol: float,
    n: int,
    label: StateLabel,
) -> StepResult:
    """Bring a transported state back to its initial well (theta from n pi to 0)."""
    return _run_transport(setup, grid, cfg, t_ol, n, label, reverse=True)


def run_spectator(
    setup: GateSetup,
    grid: Grid,
    cfg: SimulationConfig,
    t_ol: float,
    n: int,
    label: StateLabel,
) -> StepResult:
    """Atom held by its aperture trap while the state lattice moves past it.

    The fidelity is measured against the initial ground state throughout.
    """
    initial, _ = spectator_ground_state(setup, grid, cfg.ground_state, label)
    trap = nffd_field(setup.aperture, grid).potential
    potential = compose(
        StaticTerm(grid, trap),
        MovingLatticeTerm(grid, setup.lattice, ThetaSchedule(n, t_ol), label),
    )
    evolution = dynamics_service.propagate(
        initial, potential, t_ol, cfg.propagator, reference=initial
    )
    result = _step_result(StepId.SPECTATOR, t_ol, evolution, label, n=float(n))
    dips = count_dips(result.fidelity_trace, min_separation=dip_separation(t_ol, n))
    result.parameters["dips"] = float(dips)
    logger.info(f"Spectator trace shows {dips} dips")
    return result


# ---------------------------------------------------------------------------
# Interaction and gate
# ---------------------------------------------------------------------------


def well_states(
    setup: GateSetup,
    cfg: GroundStateConfig,
    method: InteractionMethod = InteractionMethod.SEPARABLE,
    points: int | None = None,
    half_width: float | None = None,
) -> Wavefunction | tuple[Wavefunction, ...]:
    """Ground state of one lattice well for the collisional energy.

    The separable form multiplies 1-D ground states of the cuts through the
    well minimum along x, y and z; ``grid3d`` relaxes on a volume.
    """
    lattice = setup.lattice
    if method == InteractionMethod.GRID3D:
        points = points or 64
        half_width = half_width or 1.5
        extents = {
            "x": (-half_width, half_width),
            "y": (-half_width, half_width),
            "z": (lattice.center - half_width, lattice.center + half_width),
        }
        state, _ = lattice_ground_state(setup, Grid.build(extents, points), cfg)
        return state

    points = points or 256
    half_width = half_width or 2.0
    anchor = (0.0, 0.0, lattice.center)
    x_grid = Grid.build({"x": (-half_width, half_width)}, points, anchor)
    factors = [lattice_ground_state(setup, x_grid, cfg)[0]]
    for name, middle in (("y", 0.0), ("z", lattice.center)):
        span = (middle - half_width, middle + half_width)
        grid = Grid.build({name: span}, points, anchor)
        state, _ = dynamics_service.ground_state(
            lattice_potential(lattice, grid), grid, cfg
        )
        factors.append(state)
    return tuple(factors)


def run_interaction(
    setup: GateSetup,
    cfg: GroundStateConfig,
    scattering_length: float,
    phase: float = math.pi,
    frequency_hz: float | None = None,
    method: InteractionMethod = InteractionMethod.SEPARABLE,
    points: int | None = None,
) -> InteractionReport:
    """Collisional energy of the shared well and the hold time for ``phase``."""
    states = well_states(setup, cfg, method, points)
    return interaction_service.interaction_energy(
        states, scattering_length, setup.units, phase, frequency_hz
    )


def run_gate(
    setup: GateSetup,
    schedule: GateSchedule,
    cfg: SimulationConfig,
    step1: Grid,
    transport: Grid,
    interaction: InteractionReport,
) -> GateRun:
    """Execute Steps 1, 2, 4 and 5 and budget the gate with achieved fidelities.

    Step 3 contributes its hold time from ``interaction``; it involves no
    nonadiabatic process and is treated as exact.
    """
    steps = [run_step1(setup, step1, cfg, schedule.t_f)]
    for label in (StateLabel.ZERO, StateLabel.ONE):
        steps.append(run_step2(setup, transport, cfg, schedule.t_ol, schedule.n, label))
    for label in (StateLabel.ZERO, StateLabel.ONE):
        steps.append(run_step4(setup, transport, cfg, schedule.t_ol, schedule.n, label))
    steps.append(run_step5(setup, step1, cfg, schedule.t_f))

    worst = min(step.achieved_fidelity for step in steps)
    units = setup.units
    budget = budget_service.aggregate_budget(
        units.time_to_physical(schedule.t_f),
        units.time_to_physical(schedule.t_ol),
        units.time_to_physical(schedule.t_hold),
        worst,
    )
    return GateRun(steps=tuple(steps), interaction=interaction, budget=budget)


# ---------------------------------------------------------------------------
# Curve analysis
# ---------------------------------------------------------------------------


def find_min_time(
    evaluate: Callable[[float], float],
    fidelity_target: float,
    bracket: tuple[float, float],
    scan_step: float = DEFAULT_SCAN_STEP,
    xtol: float = 1e-3,
) -> float:
    """Shortest duration whose final fidelity reaches ``fidelity_target``.

    The bracket is scanned every ``scan_step``; the first upward crossing
    that stays above the target for one further scan step is refined by
    Brent's method. Oscillating curves therefore report their first stable
    crossing.

    Raises:
        TargetNotReachedError: If no scanned duration reaches the target.
    """
    lower, upper = bracket
    if not upper > lower or scan_step <= 0:
        raise InvalidParameterError("Need lower < upper and a positive scan step")
    seen: dict[float, float] = {}

    def fidelity(duration: float) -> float:
        if duration not in seen:
            seen[duration] = evaluate(duration)
        return seen[duration]

    if fidelity(lower) >= fidelity_target:
        return lower
    count = math.ceil((upper - lower) / scan_step - 1e-9)
    times = [min(lower + i * scan_step, upper) for i in range(count + 1)]
    values = [fidelity(t) for t in times]
    for i in range(1, len(times)):
        if values[i] < fidelity_target or values[i - 1] >= fidelity_target:
            continue
        if i + 1 < len(times) and values[i + 1] < fidelity_target:
            continue
        crossing = optimize.brentq(
            lambda t: fidelity(t) - fidelity_target, times[i - 1], times[i], xtol=xtol
        )
        logger.info(f"Fidelity {fidelity_target} first reached at T = {crossing:.4f}")
        return float(crossing)
    raise TargetNotReachedError(fidelity_target, max(values))


def count_dips(
    trace: list[tuple[float, float]] | np.ndarray,
    prominence: float = DIP_PROMINENCE,
    relative_depth: float = DIP_RELATIVE_DEPTH,
    min_separation: float = 0.0,
) -> int:
    """Number of interior fidelity dips.

    A dip is a minimum whose prominence reaches both ``prominence`` and
    ``relative_depth`` times the full swing of the trace, so trap-frequency
    wiggles riding on the slow dips are not counted. Minima closer than
    ``min_separation`` (in trace time) count once.

    Args:
        trace: (time, fidelity) samples at a uniform spacing.
        prominence: Absolute prominence floor.
        relative_depth: Prominence floor as a fraction of max(F) - min(F).
        min_separation: Shortest time between two counted dips.

    Returns:
        The number of dips.
    """
    samples = np.asarray(trace, dtype=float).reshape(-1, 2)
    if samples.shape[0] < 3:
        return 0
    times, values = samples[:, 0], samples[:, 1]
    swing = float(values.max() - values.min())
    distance = None
    if min_separation > 0:
        spacing = float(np.median(np.diff(times)))
        distance = max(1, int(min_separation / spacing))
    peaks, _ = find_peaks(
        -values, prominence=max(prominence, relative_depth * swing), distance=distance
    )
    return int(peaks.size)


def dip_separation(t_ol: float, n: int) -> float:
    """Quarter of the shortest time in which theta(t) turns by pi / 2.

    The angle turns fastest at t = T_OL / 2, at n pi^2 / (2 T_OL).
    """
    if n == 0 or t_ol == 0:
        return 0.0
    return t_ol / (4.0 * math.pi * n)


def count_local_maxima(
    values: list[float] | np.ndarray, prominence: float | None = None
) -> int:
    """Number of interior local maxima of a sampled curve."""
    peaks, _ = find_peaks(np.asarray(values, dtype=float), prominence=prominence)
    return int(peaks.size)
