# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Split-operator dynamics: ground states and real-time propagation.

Everything runs in scaled units with H = -(1 / 2M) laplacian + V. The
kinetic factor is applied in the spatial-frequency domain, so boundaries are
periodic.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy import fft

from src.errors import ConvergenceError, InstabilityError, InvalidStateError
from src.models.evolution import EvolutionResult
from src.models.grid import Grid, Wavefunction
from src.schemas.dynamics import GroundStateConfig, PropagatorConfig
from src.schemas.results import ConvergenceReport
from src.services.potential_service import TimeDependentPotential
from src.services.wavefunction_service import (
    gaussian_state,
    normalize,
    overlap_fidelity,
)

logger = logging.getLogger(__name__)

EDGE_FRACTION = 0.1
EDGE_LEAKAGE_LIMIT = 1e-8
CONVERGENCE_THRESHOLD = 1e-4


def _fftn(values: np.ndarray, workers: int) -> np.ndarray:
    return fft.fftn(values, workers=workers)


def _ifftn(values: np.ndarray, workers: int) -> np.ndarray:
    return fft.ifftn(values, workers=workers)


def kinetic(psi: Wavefunction, mass: float, workers: int = 1) -> np.ndarray:
    """Apply -(1 / 2M) laplacian spectrally."""
    k2 = psi.grid.wavenumber_squared
    return _ifftn(k2 / (2.0 * mass) * _fftn(psi.amplitudes, workers), workers)


def apply_hamiltonian(
    psi: Wavefunction, potential: np.ndarray, mass: float, workers: int = 1
) -> np.ndarray:
    """H psi for a static potential sampled on psi's grid."""
    return kinetic(psi, mass, workers) + potential * psi.amplitudes


def energy(
    psi: Wavefunction, potential: np.ndarray, mass: float, workers: int = 1
) -> float:
    """Expectation value <psi|H|psi> / <psi|psi>."""
    h_psi = apply_hamiltonian(psi, potential, mass, workers)
    numerator = np.vdot(psi.amplitudes, h_psi).real
    return float(numerator / np.vdot(psi.amplitudes, psi.amplitudes).real)


def residual(
    psi: Wavefunction, potential: np.ndarray, mass: float, workers: int = 1
) -> float:
    """Eigen-residual ||H psi - E psi|| of a normalized state."""
    h_psi = apply_hamiltonian(psi, potential, mass, workers)
    e = energy(psi, potential, mass, workers)
    diff = h_psi - e * psi.amplitudes
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * psi.grid.cell_volume))


def harmonic_guess(potential: np.ndarray, grid: Grid, mass: float) -> Wavefunction:
    """Gaussian at the potential minimum with the local harmonic width."""
    index = np.unravel_index(int(np.argmin(potential)), potential.shape)
    centers = []
    widths = []
    for dim, axis in enumerate(grid.axes):
        coords = axis.coordinates()
        i = index[dim]
        centers.append(float(coords[i]))
        lo = (i - 1) % axis.points
        hi = (i + 1) % axis.points
        left = list(index)
        right = list(index)
        left[dim] = lo
        right[dim] = hi
        curvature = (
            potential[tuple(left)] - 2.0 * potential[index] + potential[tuple(right)]
        ) / axis.spacing**2
        if curvature > 0:
            width = (mass * curvature) ** -0.25
        else:
            width = axis.extent / 8.0
        widths.append(float(np.clip(width, 2.0 * axis.spacing, axis.extent / 4.0)))
    return gaussian_state(grid, tuple(centers), tuple(widths))


def ground_state(
    potential: np.ndarray,
    grid: Grid,
    cfg: GroundStateConfig | None = None,
    initial: Wavefunction | None = None,
) -> tuple[Wavefunction, float]:
    """Lowest eigenstate of a static potential by imaginary-time relaxation.

    Each stage runs Strang steps e^{-V dt/2} e^{-T dt} e^{-V dt/2} with
    renormalization until the energy changes by less than ``energy_tol`` per
    step; every further stage divides dt by four.

    Raises:
        ConvergenceError: If ``max_iters`` is exhausted or the final residual
            exceeds ``residual_tol * max(1, |E|)``.
    """
    cfg = cfg or GroundStateConfig()
    potential = np.asarray(potential, dtype=float)
    if potential.shape != grid.shape:
        raise InvalidStateError("Potential shape does not match the grid")
    psi = normalize(initial) if initial is not None else harmonic_guess(
        potential, grid, cfg.mass
    )
    shifted = potential - float(np.min(potential))
    workers = cfg.fft_workers
    k2 = grid.wavenumber_squared
    amplitudes = np.array(psi.amplitudes)
    volume = grid.cell_volume
    iterations = 0
    e_now = energy(psi, potential, cfg.mass, workers)

    dt = cfg.dt
    for stage in range(cfg.refinement_stages):
        half_v = np.exp(-0.5 * dt * shifted)
        kin = np.exp(-dt * k2 / (2.0 * cfg.mass))
        converged = False
        while iterations < cfg.max_iters:
            for _ in range(cfg.check_every):
                spectrum = _fftn(half_v * amplitudes, workers)
                amplitudes = half_v * _ifftn(kin * spectrum, workers)
                amplitudes /= math.sqrt(np.sum(np.abs(amplitudes) ** 2) * volume)
            iterations += cfg.check_every
            e_prev = e_now
            current = Wavefunction(grid, amplitudes)
            e_now = energy(current, potential, cfg.mass, workers)
            if abs(e_prev - e_now) < cfg.energy_tol * cfg.check_every:
                converged = True
                break
        if not converged:
            res = residual(Wavefunction(grid, amplitudes), potential, cfg.mass, workers)
            raise ConvergenceError(
                f"Ground state not converged after {iterations} iterations", res
            )
        logger.debug(f"Stage {stage} converged at E = {e_now:.10f} (dt = {dt:g})")
        dt /= 4.0

    psi = Wavefunction(grid, amplitudes)
    res = residual(psi, potential, cfg.mass, workers)
    if res > cfg.residual_tol * max(1.0, abs(e_now)):
        raise ConvergenceError("Ground-state residual above tolerance", res)
    logger.info(
        f"Ground state E = {e_now:.8f} after {iterations} iterations "
        f"(residual {res:.2e})"
    )
    return psi, e_now


def absorbing_mask(grid: Grid) -> np.ndarray:
    """cos^(1/8) absorber over the outer tenth of every axis."""
    mask = np.ones(grid.shape)
    for dim, axis in enumerate(grid.axes):
        index = np.arange(axis.points)
        width = max(1, int(EDGE_FRACTION * axis.points))
        tail = axis.points - 1 - width
        depth = np.maximum(width - index, 0) + np.maximum(index - tail, 0)
        profile = np.abs(np.cos(0.5 * math.pi * depth / width)) ** 0.125
        shape = [1] * grid.dimensionality
        shape[dim] = axis.points
        mask = mask * profile.reshape(shape)
    return mask


def edge_probability(psi: Wavefunction) -> float:
    """Probability inside the outer tenth of any axis."""
    inner = np.ones(psi.grid.shape, dtype=bool)
    for dim, axis in enumerate(psi.grid.axes):
        width = max(1, int(EDGE_FRACTION * axis.points))
        keep = np.zeros(axis.points, dtype=bool)
        keep[width : axis.points - width] = True
        shape = [1] * psi.grid.dimensionality
        shape[dim] = axis.points
        inner &= keep.reshape(shape)
    density = psi.density()
    return float(np.sum(density[~inner]) * psi.grid.cell_volume)


def propagate(
    psi0: Wavefunction,
    potential: TimeDependentPotential,
    duration: float,
    cfg: PropagatorConfig | None = None,
    reference: Wavefunction | None = None,
    start: float = 0.0,
) -> EvolutionResult:
    """Evolve psi0 from ``start`` to ``start + duration`` under i d/dt psi = H psi.

    A negative duration integrates backwards in time. The potential is sampled
    at the midpoint of every step, and dt is shrunk so that the steps land
    exactly on the end time. The fidelity against ``reference`` is recorded at
    the start, every ``trace_stride`` steps and at the end.

    Raises:
        InvalidStateError: If psi0 is not normalized.
        InstabilityError: If the norm drifts by more than ``max_norm_drift``
            (only growth counts when the absorbing mask is active).
    """
    cfg = cfg or PropagatorConfig()
    grid = psi0.grid
    potential.grid.require_compatible(grid)
    if reference is not None:
        reference.grid.require_compatible(grid)
    norm0 = psi0.norm_squared()
    if abs(norm0 - 1.0) > 1e-6:
        raise InvalidStateError(f"Initial state is not normalized (norm^2 = {norm0})")

    steps = math.ceil(abs(duration) / cfg.dt - 1e-9) if duration else 0
    step = duration / steps if steps else 0.0
    workers = cfg.fft_workers
    kin = np.exp(-1j * step * grid.wavenumber_squared / (2.0 * cfg.mass))
    mask = absorbing_mask(grid) if cfg.absorbing_mask else None
    static_half = (
        np.exp(-0.5j * step * potential(start)) if potential.is_static else None
    )

    amplitudes = np.array(psi0.amplitudes)
    trace: list[tuple[float, float]] = []

    def record(t: float) -> None:
        if reference is not None:
            current = Wavefunction(grid, amplitudes)
            trace.append((t, overlap_fidelity(current, reference)))

    def check_norm() -> float:
        drift = float(np.sum(np.abs(amplitudes) ** 2) * grid.cell_volume) - norm0
        if not math.isfinite(drift):
            raise InstabilityError(float("inf"))
        if (drift if mask is not None else abs(drift)) > cfg.max_norm_drift:
            raise InstabilityError(abs(drift))
        return abs(drift)

    record(start)
    for j in range(steps):
        if static_half is None:
            half = np.exp(-0.5j * step * potential(start + (j + 0.5) * step))
        else:
            half = static_half
        amplitudes = half * _ifftn(kin * _fftn(half * amplitudes, workers), workers)
        if mask is not None:
            amplitudes *= mask
        if (j + 1) % cfg.trace_stride == 0 or j + 1 == steps:
            check_norm()
            record(start + (j + 1) * step)

    drift = check_norm()
    final = Wavefunction(grid, amplitudes)
    leaked = edge_probability(final)
    if leaked > EDGE_LEAKAGE_LIMIT:
        logger.warning(
            f"Probability {leaked:.2e} reached the outer {EDGE_FRACTION:.0%} of the "
            f"grid; enlarge the domain"
        )
    logger.debug(f"Propagated {steps} steps of {step:g} tau (norm drift {drift:.2e})")
    return EvolutionResult(
        final_state=final,
        fidelity_trace=tuple(trace),
        norm_drift=drift,
        steps=steps,
        dt=abs(step),
    )


def convergence_check(
    run: Callable[[float], float],
    dt: float,
    threshold: float = CONVERGENCE_THRESHOLD,
    refined_run: Callable[[float], float] | None = None,
) -> ConvergenceReport:
    """Compare a scenario's final fidelity at dt and dt / 2.

    Args:
        run: Maps a time step to the scenario's final fidelity.
        dt: Base time step.
        threshold: Largest accepted change.
        refined_run: Optional same scenario on a refined grid, evaluated at dt.
    """
    coarse = run(dt)
    fine = run(0.5 * dt)
    dt_delta = abs(coarse - fine)
    grid_delta = abs(refined_run(dt) - coarse) if refined_run is not None else None
    worst = max(dt_delta, grid_delta or 0.0)
    passed = worst < threshold
    if not passed:
        logger.warning(
            f"Resolution check failed: fidelity changes by {worst:.2e} "
            f"(threshold {threshold:.0e})"
        )
    return ConvergenceReport(
        dt=dt,
        fidelity=coarse,
        refined_fidelity=fine,
        dt_delta=dt_delta,
        grid_delta=grid_delta,
        threshold=threshold,
        passed=passed,
    )
