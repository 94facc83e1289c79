# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Unit tests for ground states and split-operator propagation."""
import math

import numpy as np
import pytest
from scipy import fft, linalg

from src.errors import ConvergenceError, InvalidStateError
from src.models.grid import Grid, Wavefunction
from src.models.params import LATTICE_MASS
from src.schemas.dynamics import GroundStateConfig, PropagatorConfig
from src.services import dynamics_service as ds
from src.services.potential_service import StaticTerm, compose
from src.services.wavefunction_service import (
    expectation_position,
    gaussian_state,
    inner_product,
    overlap_fidelity,
    position_width,
)


def _dense_spectral_energy(potential: np.ndarray, grid: Grid, mass: float) -> float:
    """Lowest eigenvalue of the same spectral Hamiltonian built as a matrix."""
    n = grid.shape[0]
    k2 = grid.axes[0].wavenumbers() ** 2
    kinetic = fft.ifft(k2[:, None] / (2 * mass) * fft.fft(np.eye(n), axis=0), axis=0)
    hamiltonian = kinetic + np.diag(potential)
    hermitian = 0.5 * (hamiltonian + hamiltonian.conj().T)
    return float(linalg.eigvalsh(hermitian)[0])


class TestGroundState:
    """Test imaginary-time relaxation."""

    def test_harmonic_oscillator(
        self, line_grid, harmonic_potential, unit_mass_ground_state
    ):
        """Test that the oscillator ground energy is 1/2."""
        psi, e = ds.ground_state(harmonic_potential, line_grid, unit_mass_ground_state)

        assert e == pytest.approx(0.5, abs=1e-5)
        assert psi.norm_squared() == pytest.approx(1.0)
        assert position_width(psi) == pytest.approx(1 / math.sqrt(2), rel=1e-3)

    def test_lattice_well_matches_dense_diagonalization(self):
        """Test the 40 E_r well against the dense spectral Hamiltonian."""
        grid = Grid.build({"x": (-0.25, 0.25)}, 64)
        x, _, _ = grid.cartesian()
        potential = -40.0 * np.cos(2 * math.pi * x) ** 2

        _, e = ds.ground_state(potential, grid)
        oracle = _dense_spectral_energy(potential, grid, LATTICE_MASS)

        assert e == pytest.approx(oracle, rel=5e-3)
        assert e == pytest.approx(-40.0 + math.sqrt(40.0), rel=0.05)

    def test_residual_small(
        self, line_grid, harmonic_potential, unit_mass_ground_state
    ):
        """Test that the converged state is an eigenstate."""
        psi, _ = ds.ground_state(harmonic_potential, line_grid, unit_mass_ground_state)

        assert ds.residual(psi, harmonic_potential, 1.0) < 1e-2

    def test_iteration_limit_raises(self, line_grid, harmonic_potential):
        """Test that exhausting max_iters reports the residual."""
        cfg = GroundStateConfig(mass=1.0, max_iters=10, check_every=10)
        start = gaussian_state(line_grid, center=(3.0,), width=0.3)

        with pytest.raises(ConvergenceError) as info:
            ds.ground_state(harmonic_potential, line_grid, cfg, initial=start)

        assert info.value.residual > 0

    def test_shape_mismatch_raises(self, line_grid):
        """Test that the potential must match the grid."""
        with pytest.raises(InvalidStateError):
            ds.ground_state(np.zeros(7), line_grid)


class TestEnergy:
    """Test the energy functional."""

    def test_gaussian_in_harmonic_trap(self, line_grid, harmonic_potential):
        """Test <H> = (1/s^2 + s^2) / 4 for a Gaussian of width s."""
        s = 1.5
        psi = gaussian_state(line_grid, width=s)

        value = ds.energy(psi, harmonic_potential, 1.0)

        assert value == pytest.approx((1 / s**2 + s**2) / 4, rel=1e-8)


class TestPropagate:
    """Test real-time split-operator propagation."""

    def test_free_gaussian_moves_and_spreads(self):
        """Test center k t / M and width s sqrt(1 + (t / M s^2)^2) / sqrt 2."""
        grid = Grid.build({"x": (-30.0, 30.0)}, 512)
        psi0 = gaussian_state(grid, center=(-2.0,), width=1.0, momentum=(2.0,))
        cfg = PropagatorConfig(dt=1e-2, mass=1.0)

        result = ds.propagate(psi0, compose(grid=grid), 2.0, cfg)

        final = result.final_state
        expected_width = math.sqrt(1 + 2.0**2) / math.sqrt(2)
        assert expectation_position(final) == pytest.approx(2.0, abs=1e-6)
        assert position_width(final) == pytest.approx(expected_width, rel=5e-3)

    def test_plane_wave_phase(self, line_grid, unit_mass_propagator):
        """Test that a grid plane wave picks up exactly exp(-i k^2 t / 2M)."""
        x, _, _ = line_grid.cartesian()
        k0 = 2 * math.pi * 3 / 20.0
        psi0 = Wavefunction(line_grid, np.exp(1j * k0 * x) / math.sqrt(20.0))

        result = ds.propagate(psi0, compose(grid=line_grid), 3.0, unit_mass_propagator)

        phase = inner_product(psi0, result.final_state)
        assert phase == pytest.approx(np.exp(-0.5j * k0**2 * 3.0), abs=1e-10)

    def test_harmonic_oscillation_period(
        self, line_grid, harmonic_potential, unit_mass_propagator
    ):
        """Test that <x> of a displaced packet repeats every 2 pi / omega."""
        psi = gaussian_state(line_grid, center=(1.0,), width=1.0)
        potential = compose(StaticTerm(line_grid, harmonic_potential))
        chunk = 0.05
        times, positions = [0.0], [expectation_position(psi)]
        while times[-1] < 3 * 2 * math.pi:
            psi = ds.propagate(psi, potential, chunk, unit_mass_propagator).final_state
            times.append(times[-1] + chunk)
            positions.append(expectation_position(psi))

        t, x = np.array(times), np.array(positions)
        sign_change = np.nonzero(np.signbit(x[:-1]) != np.signbit(x[1:]))[0]
        crossings = t[sign_change] - x[sign_change] * chunk / (
            x[sign_change + 1] - x[sign_change]
        )
        period = 2 * (crossings[-1] - crossings[0]) / (crossings.size - 1)

        assert crossings.size == 6
        assert period == pytest.approx(2 * math.pi, rel=5e-3)

    def test_second_order_in_dt(self, line_grid, harmonic_potential):
        """Test that halving dt cuts the phase error of <x> about four times."""
        psi0 = gaussian_state(line_grid, center=(1.0,), width=1.0)
        potential = compose(StaticTerm(line_grid, harmonic_potential))

        def error(dt: float) -> float:
            cfg = PropagatorConfig(dt=dt, mass=1.0)
            result = ds.propagate(psi0, potential, 2.0, cfg)
            return abs(expectation_position(result.final_state) - math.cos(2.0))

        ratio = error(0.1) / error(0.05)

        assert 3.5 < ratio < 4.5

    def test_stationary_state_keeps_fidelity(self, line_grid, harmonic_potential):
        """Test that an eigenstate stays put under a static potential."""
        cfg = GroundStateConfig(mass=1.0, energy_tol=1e-13)
        psi, e = ds.ground_state(harmonic_potential, line_grid, cfg)
        potential = compose(StaticTerm(line_grid, harmonic_potential))

        result = ds.propagate(
            psi, potential, 5.0, PropagatorConfig(dt=1e-3, mass=1.0), reference=psi
        )

        assert result.final_fidelity == pytest.approx(1.0, abs=1e-8)
        final_energy = ds.energy(result.final_state, harmonic_potential, 1.0)
        assert final_energy == pytest.approx(e, abs=1e-6)

    def test_norm_conserved(self, line_grid, harmonic_potential, unit_mass_propagator):
        """Test that 10^4 steps keep the norm to 1e-10."""
        psi0 = gaussian_state(line_grid, center=(2.0,), width=0.7)
        potential = compose(StaticTerm(line_grid, harmonic_potential))

        result = ds.propagate(psi0, potential, 10.0, unit_mass_propagator)

        assert result.steps == 10_000
        assert result.norm_drift < 1e-10

    def test_time_reversal(self, line_grid, harmonic_potential, unit_mass_propagator):
        """Test that propagating forward then backward restores the state."""
        psi0 = gaussian_state(line_grid, center=(1.0,), width=0.8, momentum=(0.5,))
        potential = compose(StaticTerm(line_grid, harmonic_potential))

        there = ds.propagate(psi0, potential, 1.5, unit_mass_propagator)
        back = ds.propagate(there.final_state, potential, -1.5, unit_mass_propagator)

        assert overlap_fidelity(back.final_state, psi0) == pytest.approx(1.0, abs=1e-10)

    def test_trace_sampling(self, line_grid, harmonic_potential):
        """Test trace points at the start, every stride and at the end."""
        psi0 = gaussian_state(line_grid, width=1.0)
        potential = compose(StaticTerm(line_grid, harmonic_potential))
        cfg = PropagatorConfig(dt=1e-2, trace_stride=10, mass=1.0)

        result = ds.propagate(psi0, potential, 1.0, cfg, reference=psi0)

        times = [t for t, _ in result.fidelity_trace]
        assert len(times) == 11
        assert times[0] == 0.0
        assert times[-1] == pytest.approx(1.0)
        assert result.fidelity_trace[0][1] == pytest.approx(1.0)

    def test_dt_lands_on_end_time(self, line_grid, harmonic_potential):
        """Test that the step is shrunk to hit the end time exactly."""
        psi0 = gaussian_state(line_grid, width=1.0)
        potential = compose(StaticTerm(line_grid, harmonic_potential))

        result = ds.propagate(psi0, potential, 0.105, PropagatorConfig(dt=0.01))

        assert result.steps == 11
        assert result.dt * result.steps == pytest.approx(0.105)

    def test_unnormalized_input_raises(self, line_grid):
        """Test that the initial state must be normalized."""
        psi = gaussian_state(line_grid, width=1.0)
        doubled = Wavefunction(line_grid, 2.0 * psi.amplitudes)

        with pytest.raises(InvalidStateError):
            ds.propagate(doubled, compose(grid=line_grid), 1.0)

    def test_absorbing_mask_only_removes_norm(self, line_grid):
        """Test that the mask absorbs a packet running into the edge."""
        psi0 = gaussian_state(line_grid, center=(5.0,), width=0.5, momentum=(8.0,))
        cfg = PropagatorConfig(dt=1e-3, mass=1.0, absorbing_mask=True)

        result = ds.propagate(psi0, compose(grid=line_grid), 1.0, cfg)

        assert result.final_state.norm_squared() < 0.5


class TestAbsorbingMask:
    """Test the mask profile and the edge probability."""

    def test_interior_untouched(self, line_grid):
        """Test that the inner 80% of the grid keeps weight one."""
        mask = ds.absorbing_mask(line_grid)

        assert np.all(mask[13:115] == 1.0)
        assert np.all(mask <= 1.0)
        assert mask[0] < 0.02
        assert mask[0] < mask[6] < 1.0

    def test_edge_probability(self, line_grid):
        """Test that a centered narrow packet has no weight at the edge."""
        psi = gaussian_state(line_grid, width=0.5)

        assert ds.edge_probability(psi) < 1e-12


class TestConvergenceCheck:
    """Test the dt-halving report."""

    def test_passes_for_converged_run(self):
        """Test that a dt-independent result passes."""
        report = ds.convergence_check(lambda dt: 0.995, 1e-3)

        assert report.passed
        assert report.dt_delta == 0.0

    def test_fails_for_unconverged_run(self):
        """Test that a strongly dt-dependent result fails."""
        report = ds.convergence_check(lambda dt: 1.0 - dt, 1e-2)

        assert not report.passed
        assert report.dt_delta == pytest.approx(5e-3)
