# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Scaled unit system derived from the lattice wavelength and atomic mass."""

import math

from scipy import constants

from src.errors import InvalidParameterError
from src.models.params import PhysicalParams, ScaledUnits


def derive_scaled_units(params: PhysicalParams) -> ScaledUnits:
    """Compute E_r = hbar^2 k^2 / 2m, tau = hbar / E_r and k = 2 pi / lambda_OL."""
    if not params.lattice_wavelength > 0 or not params.atomic_mass > 0:
        raise InvalidParameterError(
            "Lattice wavelength and atomic mass must be positive"
        )
    wavenumber = 2.0 * math.pi / params.lattice_wavelength
    recoil = constants.hbar**2 * wavenumber**2 / (2.0 * params.atomic_mass)
    return ScaledUnits(
        recoil_energy=recoil,
        time_unit=constants.hbar / recoil,
        length_unit=params.lattice_wavelength,
        wavenumber=wavenumber,
    )
