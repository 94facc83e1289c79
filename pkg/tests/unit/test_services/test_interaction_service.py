# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Unit tests for the collisional phase."""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import InvalidParameterError, InvalidStateError
from src.models.grid import Grid, Wavefunction
from src.models.params import PhysicalParams
from src.schemas.results import InteractionReport
from src.services import interaction_service
from src.services.units_service import derive_scaled_units
from src.services.wavefunction_service import gaussian_state


@pytest.fixture
def gaussian_factors():
    """Three normalized 1-D Gaussians of widths 0.06, 0.27 and 0.27."""
    factors = []
    for name, width in (("x", 0.06), ("y", 0.27), ("z", 0.27)):
        grid = Grid.build({name: (-2.0, 2.0)}, 256)
        factors.append(gaussian_state(grid, width=width))
    return tuple(factors)


class TestQuarticIntegral:
    """Test the integral of |psi|^4."""

    def test_gaussian(self):
        """Test 1 / (s sqrt(2 pi)) for a 1-D Gaussian of width s."""
        grid = Grid.build({"x": (-10.0, 10.0)}, 256)
        psi = gaussian_state(grid, width=0.8)

        value = interaction_service.quartic_integral(psi)

        assert value == pytest.approx(1 / (0.8 * math.sqrt(2 * math.pi)), rel=1e-8)

    def test_separable_product(self, gaussian_factors):
        """Test that factors multiply."""
        single = [interaction_service.quartic_integral(f) for f in gaussian_factors]

        product = interaction_service.quartic_integral(gaussian_factors)

        assert product == pytest.approx(math.prod(single))

    def test_unnormalized_state_raises(self):
        """Test that the integral needs normalized input."""
        grid = Grid.build({"x": (-10.0, 10.0)}, 64)
        psi = gaussian_state(grid)

        with pytest.raises(InvalidStateError):
            interaction_service.quartic_integral(
                Wavefunction(grid, 2.0 * psi.amplitudes)
            )


class TestInteractionEnergy:
    """Test E_int, its frequency and the hold time."""

    def test_harmonic_well_ratio(self, gaussian_factors):
        """Test that a 40 E_r harmonic well gives E_int / E_r near 0.058."""
        units = derive_scaled_units(PhysicalParams())

        report = interaction_service.interaction_energy(
            gaussian_factors, 5.19e-9, units
        )

        assert 0.045 <= report.interaction_ratio <= 0.070
        assert report.frequency_hz == pytest.approx(
            units.energy_to_frequency(report.interaction_ratio)
        )
        assert not report.frequency_supplied

    def test_supplied_frequency(self, gaussian_factors):
        """Test that 218 Hz gives a 2.2936 ms hold time."""
        units = derive_scaled_units(PhysicalParams())

        report = interaction_service.interaction_energy(
            gaussian_factors, 5.19e-9, units, frequency_hz=218.0
        )

        assert report.hold_time_s * 1e3 == pytest.approx(2.2936, abs=5e-5)
        assert report.hold_time_tau == pytest.approx(
            units.time_to_scaled(report.hold_time_s)
        )
        assert report.frequency_supplied

    def test_joules_agree_with_scaled_ratio(self, gaussian_factors):
        """Test the dimensional energy against E_r times the ratio."""
        params = PhysicalParams()
        units = derive_scaled_units(params)
        ratio = interaction_service.interaction_ratio(
            gaussian_factors, units.length_to_scaled(params.scattering_length)
        )

        joules = interaction_service.interaction_energy_joules(
            gaussian_factors,
            params.scattering_length,
            params.atomic_mass,
            units.length_unit,
        )

        assert joules == pytest.approx(units.energy_to_physical(ratio), rel=1e-10)

    def test_hold_time_requires_positive_frequency(self):
        """Test that a zero frequency is rejected."""
        with pytest.raises(InvalidParameterError):
            interaction_service.hold_time(0.0)

    def test_report_checks_phase(self):
        """Test that an inconsistent hold time fails validation."""
        with pytest.raises(ValidationError):
            InteractionReport(
                interaction_ratio=0.058,
                frequency_hz=218.0,
                hold_time_s=1e-3,
                hold_time_tau=23.4,
            )


class TestGateUnitary:
    """Test the controlled-phase gate."""

    def test_pi_phase(self):
        """Test diag(1, -1, 1, 1) = (I x Z) CZ."""
        gate = interaction_service.gate_unitary(math.pi)
        local_z = np.diag([1, -1, 1, -1])
        cz = np.diag([1, 1, 1, -1])

        np.testing.assert_allclose(gate.matrix, local_z @ cz, atol=1e-15)
        assert gate.is_unitary()
        assert gate.is_diagonal()

    def test_phases(self):
        """Test that only |01> picks up the phase."""
        gate = interaction_service.gate_unitary(0.5)

        np.testing.assert_allclose(gate.phases(), [0.0, 0.5, 0.0, 0.0], atol=1e-15)

    def test_composition(self):
        """Test that two half-phase gates make the full gate."""
        half = interaction_service.gate_unitary(math.pi / 2)

        np.testing.assert_allclose(
            (half @ half).matrix,
            interaction_service.gate_unitary(math.pi).matrix,
            atol=1e-15,
        )
