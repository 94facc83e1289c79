# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Physical parameters and the scaled unit system."""

import math
from dataclasses import dataclass

from scipy import constants

from src.errors import InvalidParameterError

RB87_MASS = 86.909180527 * constants.atomic_mass

# Kinetic prefactor in lattice units: hbar^2 / (2 m lambda^2) = E_r / (4 pi^2),
# i.e. H = -(1 / 2M) laplacian + V with M = 2 pi^2.
LATTICE_MASS = 2.0 * math.pi**2


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs of the gate model (SI units, energies in joules).

    The defaults reproduce the parameter table for 87Rb trapped behind an
    aperture of radius 1.5 trap wavelengths.
    """

    aperture_radius: float = 1.5 * 795.118e-9
    trap_wavelength: float = 795.118e-9
    trap_intensity: float = 2.5e9  # W/m^2 (2.5e5 W/cm^2)
    atomic_line: float = 794.979e-9
    trap_minimum: float = 1.7e-6
    lattice_wavelength: float = 785e-9
    trap_depth: float = constants.h * 1.03e6
    lattice_depth: float = constants.h * 1.47e5
    waist: float = 4 * 785e-9
    scattering_length: float = 5.19e-9
    atomic_mass: float = RB87_MASS
    half_linewidth: float | None = None

    def __post_init__(self) -> None:
        """Validate the positivity and detuning invariants."""
        positive = {
            "aperture_radius": self.aperture_radius,
            "trap_wavelength": self.trap_wavelength,
            "trap_intensity": self.trap_intensity,
            "atomic_line": self.atomic_line,
            "trap_minimum": self.trap_minimum,
            "lattice_wavelength": self.lattice_wavelength,
            "waist": self.waist,
            "scattering_length": self.scattering_length,
            "atomic_mass": self.atomic_mass,
        }
        for name, value in positive.items():
            if not value > 0:
                raise InvalidParameterError(f"{name} must be positive, got {value}")
        if self.trap_depth < 0 or self.lattice_depth < 0:
            raise InvalidParameterError("Trap and lattice depths must be >= 0")
        if self.trap_wavelength == self.atomic_line:
            raise InvalidParameterError(
                "Trap wavelength equals the atomic line (zero detuning)"
            )
        if self.half_linewidth is not None and not self.half_linewidth > 0:
            raise InvalidParameterError("half_linewidth must be positive")


@dataclass(frozen=True)
class ScaledUnits:
    """Lattice unit system: length lambda_OL, energy E_r, time hbar / E_r."""

    recoil_energy: float
    time_unit: float
    length_unit: float
    wavenumber: float

    @property
    def recoil_frequency(self) -> float:
        """Recoil energy expressed as h x frequency (Hz)."""
        return self.recoil_energy / constants.h

    def length_to_scaled(self, meters: float) -> float:
        """Convert a length in meters to lattice wavelengths."""
        return meters / self.length_unit

    def length_to_physical(self, scaled: float) -> float:
        """Convert a length in lattice wavelengths to meters."""
        return scaled * self.length_unit

    def energy_to_scaled(self, joules: float) -> float:
        """Convert an energy in joules to recoil energies."""
        return joules / self.recoil_energy

    def energy_to_physical(self, scaled: float) -> float:
        """Convert an energy in recoil energies to joules."""
        return scaled * self.recoil_energy

    def frequency_to_scaled(self, hertz: float) -> float:
        """Convert an energy given as h x frequency to recoil energies."""
        return constants.h * hertz / self.recoil_energy

    def energy_to_frequency(self, scaled: float) -> float:
        """Convert recoil energies to h x frequency in Hz."""
        return scaled * self.recoil_frequency

    def time_to_scaled(self, seconds: float) -> float:
        """Convert a time in seconds to units of tau."""
        return seconds / self.time_unit

    def time_to_physical(self, scaled: float) -> float:
        """Convert a time in units of tau to seconds."""
        return scaled * self.time_unit
