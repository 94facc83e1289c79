# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Unit tests for the gate protocol on small grids."""
import math

import numpy as np
import pytest

from src.errors import (
    InvalidParameterError,
    TargetNotReachedError,
    TransportDomainError,
)
from src.models.enums import StateLabel, StepId
from src.schemas.dynamics import GroundStateConfig
from src.services import protocol_service
from src.services.wavefunction_service import expectation_position, overlap_fidelity


class TestGateSetup:
    """Test the conversion to scaled units."""

    def test_scaled_geometry(self, setup):
        """Test aperture, lattice and the lattice center in lambda_OL."""
        assert setup.lattice.wavelength == 1.0
        assert setup.lattice.center == pytest.approx(1.7e-6 / 785e-9)
        assert setup.aperture.radius == pytest.approx(1.5 * 795.118 / 785.0)
        assert setup.well_half_width == 0.25

    def test_depths(self, setup):
        """Test V_0 and U_0 in recoil energies."""
        assert setup.lattice.depth == pytest.approx(39.5, rel=0.01)
        assert setup.aperture.depth == pytest.approx(276.5, rel=0.01)


class TestGrids:
    """Test grid construction."""

    def test_step1_dimensions(self, setup):
        """Test line, plane and volume grids."""
        assert protocol_service.step1_grid(setup, 64, dim=1).names == ("x",)
        assert protocol_service.step1_grid(setup, 64, dim=2).names == ("x", "z")
        assert protocol_service.step1_grid(setup, 16, dim=3).names == ("x", "y", "z")

    def test_step1_line_sits_on_lattice_axis(self, setup):
        """Test that a 1-D grid is anchored at the lattice center."""
        grid = protocol_service.step1_grid(setup, 64, dim=1)

        assert grid.anchor[2] == setup.lattice.center

    def test_step1_rejects_aperture_plane(self, setup):
        """Test that the grid must stay above z = 0."""
        with pytest.raises(InvalidParameterError):
            protocol_service.step1_grid(setup, 64, z_range=(0.0, 4.0))

    def test_transport_extent(self, setup):
        """Test +-(n lambda / 2 + margin) along x."""
        grid = protocol_service.transport_grid(setup, 6, points=256, margin=4.0)
        axis = grid.axis("x")

        assert axis.lower == -7.0
        assert axis.upper == 7.0

    def test_transport_plane(self, setup):
        """Test the transverse axis of a 2-D transport grid."""
        grid = protocol_service.transport_grid(setup, 1, points=128, dim=2)

        assert grid.shape == (128, 64)


class TestTransportStates:
    """Test transport targets."""

    def test_shift_direction(self, setup):
        """Test that |1> moves to +x and |0> to -x by n lambda / 2."""
        assert protocol_service.transport_shift(setup, 6, StateLabel.ONE) == 3.0
        assert protocol_service.transport_shift(setup, 6, StateLabel.ZERO) == -3.0

    def test_domain_too_small(self, setup):
        """Test that a destination near the edge is rejected."""
        grid = protocol_service.transport_grid(setup, 6, points=256, margin=0.5)

        with pytest.raises(TransportDomainError):
            protocol_service.transport_states(
                setup, grid, GroundStateConfig(), 6, StateLabel.ONE
            )

    def test_target_is_translated_initial(self, setup):
        """Test that the target sits one lattice constant away."""
        grid = protocol_service.transport_grid(setup, 1, points=512, margin=2.0)

        initial, target = protocol_service.transport_states(
            setup, grid, GroundStateConfig(), 1, StateLabel.ONE
        )

        assert expectation_position(initial) == pytest.approx(0.0, abs=1e-6)
        assert expectation_position(target) == pytest.approx(0.5, abs=1e-6)

    def test_lattice_well_energy(self, setup):
        """Test E close to -V_0 + sqrt(V_0) - 1/4."""
        grid = protocol_service.transport_grid(setup, 1, points=512, margin=2.0)
        depth = setup.lattice.depth

        _, e = protocol_service.lattice_ground_state(setup, grid, GroundStateConfig())

        assert e == pytest.approx(-depth + math.sqrt(depth) - 0.25, rel=0.01)


class TestSteps:
    """Test single steps on 1-D grids."""

    def test_step2_short_transport(self, setup, coarse_simulation):
        """Test that a slow one-site transport keeps a high fidelity."""
        grid = protocol_service.transport_grid(setup, 1, points=512, margin=2.0)

        result = protocol_service.run_step2(
            setup, grid, coarse_simulation, 30.0, 1, StateLabel.ONE
        )

        assert result.step == StepId.STEP2
        assert result.state_label == StateLabel.ONE
        assert result.fidelity_trace[-1][0] == pytest.approx(30.0)
        assert result.achieved_fidelity > 0.95
        assert result.parameters["n"] == 1.0

    def test_step1_line(self, setup, coarse_simulation):
        """Test that a trap ramp on the lattice axis yields a valid trace."""
        grid = protocol_service.step1_grid(setup, 256, dim=1)

        result = protocol_service.run_step1(setup, grid, coarse_simulation, 10.0)

        fidelities = [f for _, f in result.fidelity_trace]
        assert result.step == StepId.STEP1
        assert result.duration_tau == 10.0
        assert all(0.0 <= f <= 1.0 for f in fidelities)
        assert result.achieved_fidelity == fidelities[-1]

    def test_sudden_switch_off_is_static_overlap(self, setup, coarse_simulation):
        """Test that T_F = 0 gives the overlap of the two ground states."""
        grid = protocol_service.step1_grid(setup, 256, dim=1)
        gs = coarse_simulation.ground_state
        combined, _ = protocol_service.combined_ground_state(setup, grid, gs)
        lattice, _ = protocol_service.lattice_ground_state(setup, grid, gs)

        result = protocol_service.run_step1(setup, grid, coarse_simulation, 0.0)

        assert result.achieved_fidelity == pytest.approx(
            overlap_fidelity(combined, lattice), abs=1e-12
        )

    def test_step4_mirrors_step2(self, setup, coarse_simulation):
        """Test that the return transport reaches the fidelity of the outbound one."""
        grid = protocol_service.transport_grid(setup, 1, points=512, margin=2.0)

        out = protocol_service.run_step2(
            setup, grid, coarse_simulation, 10.0, 1, StateLabel.ONE
        )
        back = protocol_service.run_step4(
            setup, grid, coarse_simulation, 10.0, 1, StateLabel.ONE
        )

        assert back.step == StepId.STEP4
        assert back.achieved_fidelity == pytest.approx(
            out.achieved_fidelity, abs=1e-3
        )

    def test_spectator_at_rest(self, setup, coarse_simulation):
        """Test that a lattice that does not move leaves the atom in place."""
        grid = protocol_service.transport_grid(setup, 1, points=256, margin=2.0)

        result = protocol_service.run_spectator(
            setup, grid, coarse_simulation, 10.0, 0, StateLabel.ONE
        )

        fidelities = [f for _, f in result.fidelity_trace]
        assert result.step == StepId.SPECTATOR
        assert result.parameters["dips"] == 0.0
        assert min(fidelities) > 0.9999

    def test_spectator_one_site_has_two_dips(self, setup, coarse_simulation):
        """Test two dips when both lattice components pass the atom once."""
        grid = protocol_service.transport_grid(setup, 1, points=256, margin=2.0)

        result = protocol_service.run_spectator(
            setup, grid, coarse_simulation, 20.0, 1, StateLabel.ONE
        )

        assert result.parameters["dips"] == 2.0
        assert result.achieved_fidelity > 0.98


class TestInteraction:
    """Test the collisional chain."""

    def test_separable_well_states(self, setup):
        """Test three normalized factors along x, y and z."""
        factors = protocol_service.well_states(setup, GroundStateConfig())

        assert [f.grid.names for f in factors] == [("x",), ("y",), ("z",)]
        for factor in factors:
            assert factor.norm_squared() == pytest.approx(1.0)

    def test_ratio_and_hold_time(self, setup):
        """Test E_int / E_r in [0.045, 0.070] and t_hold at 218 Hz."""
        report = protocol_service.run_interaction(
            setup, GroundStateConfig(), 5.19e-9, frequency_hz=218.0
        )

        assert 0.045 <= report.interaction_ratio <= 0.070
        assert report.hold_time_s * 1e3 == pytest.approx(2.2936, abs=5e-5)


class TestFindMinTime:
    """Test the shortest-duration search."""

    def test_monotone_curve(self):
        """Test the crossing of 1 - exp(-t / 10) with 0.99."""
        best = protocol_service.find_min_time(
            lambda t: 1 - math.exp(-t / 10), 0.99, (10.0, 60.0)
        )

        assert best == pytest.approx(10 * math.log(100), abs=2e-3)

    def test_skips_unstable_crossing(self):
        """Test that a crossing which falls back at the next scan is ignored."""

        def curve(t: float) -> float:
            return 0.999 if 20.0 <= t < 20.25 or t >= 30.0 else 0.98

        best = protocol_service.find_min_time(curve, 0.99, (10.0, 40.0))

        assert best == pytest.approx(30.0, abs=2e-3)

    def test_already_above_target(self):
        """Test that the lower bracket is returned when it suffices."""
        assert protocol_service.find_min_time(lambda t: 1.0, 0.99, (5.0, 40.0)) == 5.0

    def test_not_reached(self):
        """Test that the error carries the best fidelity seen."""
        with pytest.raises(TargetNotReachedError) as info:
            protocol_service.find_min_time(lambda t: 0.5 + t / 1000, 0.99, (5.0, 40.0))

        assert info.value.max_fidelity == pytest.approx(0.54)

    def test_invalid_bracket(self):
        """Test that an empty bracket is rejected."""
        with pytest.raises(InvalidParameterError):
            protocol_service.find_min_time(lambda t: 1.0, 0.99, (40.0, 5.0))


class TestCurveAnalysis:
    """Test dip and maximum counting."""

    def test_count_dips(self):
        """Test three interior minima of 1 - sin^2(3 pi t) / 2."""
        t = np.linspace(0.0, 1.0, 1001)
        trace = list(zip(t, 1 - 0.5 * np.sin(3 * np.pi * t) ** 2, strict=True))

        assert protocol_service.count_dips(trace) == 3

    def test_flat_trace_has_no_dips(self):
        """Test that a constant trace has no dips."""
        trace = [(0.1 * i, 0.999) for i in range(20)]

        assert protocol_service.count_dips(trace) == 0

    def test_fast_wiggles_are_not_dips(self):
        """Test that small fast oscillations on two slow dips are ignored."""
        t = np.linspace(0.0, 1.0, 4001)
        values = 1 - 0.2 * np.sin(2 * np.pi * t) ** 2 + 0.01 * np.sin(80 * np.pi * t)

        trace = list(zip(t, values, strict=True))

        assert protocol_service.count_dips(trace, relative_depth=0.0) > 10
        assert protocol_service.count_dips(trace) == 2

    def test_close_minima_count_once(self):
        """Test that the deeper of two nearby minima is kept."""
        values = [1.0, 0.5, 0.9, 0.6, 1.0, 1.0, 1.0]
        trace = [(0.1 * i, f) for i, f in enumerate(values)]

        assert protocol_service.count_dips(trace) == 2
        assert protocol_service.count_dips(trace, min_separation=0.35) == 1

    def test_dip_separation(self):
        """Test T_OL / (4 pi n) and the static lattice."""
        assert protocol_service.dip_separation(4 * math.pi, 2) == pytest.approx(0.5)
        assert protocol_service.dip_separation(10.0, 0) == 0.0

    def test_count_local_maxima(self):
        """Test interior maxima of a zig-zag curve."""
        assert protocol_service.count_local_maxima([0.0, 1.0, 0.0, 2.0, 0.0]) == 2
