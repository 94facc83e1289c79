# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Scalar optics helpers: detuning, trap depth and laser power."""

import logging
import math

from scipy import constants

from src.errors import InvalidParameterError

logger = logging.getLogger(__name__)

# 1 W/m^2 expressed in erg s^-1 cm^-2
_SI_TO_CGS_INTENSITY = 1.0e3
_ERG_TO_JOULE = 1.0e-7
_SPEED_OF_LIGHT_CGS = constants.c * 100.0


def detuning(trap_wavelength: float, atomic_line: float) -> float:
    """Angular detuning 2 pi c (1 / lambda_F - 1 / lambda_0) in rad/s.

    Negative when the trap light is red of the atomic line.
    """
    if not trap_wavelength > 0 or not atomic_line > 0:
        raise InvalidParameterError("Wavelengths must be positive")
    return 2.0 * math.pi * constants.c * (1.0 / trap_wavelength - 1.0 / atomic_line)


def intensity_to_field_amplitude(intensity: float) -> float:
    """Gaussian-units field amplitude E_0 (statvolt/cm) for I_0 = c E_0^2 / 8 pi.

    Args:
        intensity: Incident intensity in W/m^2.
    """
    if intensity < 0:
        raise InvalidParameterError("Intensity must be >= 0")
    cgs = intensity * _SI_TO_CGS_INTENSITY
    return math.sqrt(8.0 * math.pi * cgs / _SPEED_OF_LIGHT_CGS)


def trap_depth_u0(
    intensity: float,
    half_linewidth: float,
    detuning_rad_s: float,
    wavenumber: float,
) -> float:
    """Depth scale U_0 = (3/8)(Gamma_e / |Delta|) E_0^2 / k_F^3, in joules.

    Args:
        intensity: Incident intensity in W/m^2.
        half_linewidth: Half of the spontaneous decay rate in 1/s.
        detuning_rad_s: Signed angular detuning in rad/s.
        wavenumber: Trap-light wavenumber in 1/m.

    Raises:
        InvalidParameterError: On zero detuning or non-positive inputs.
    """
    if detuning_rad_s == 0:
        raise InvalidParameterError("Zero detuning makes the trap depth diverge")
    if intensity <= 0 or half_linewidth <= 0 or wavenumber <= 0:
        raise InvalidParameterError(
            "Intensity, linewidth and wavenumber must be positive"
        )
    field_sq = intensity_to_field_amplitude(intensity) ** 2
    k_cgs = wavenumber / 100.0
    depth_erg = 0.375 * (half_linewidth / abs(detuning_rad_s)) * field_sq / k_cgs**3
    return depth_erg * _ERG_TO_JOULE


def laser_power(intensity: float, aperture_radius: float) -> float:
    """Power through the aperture, I_0 pi a^2, in watts."""
    if intensity < 0:
        raise InvalidParameterError("Intensity must be >= 0")
    if not aperture_radius > 0:
        raise InvalidParameterError("Aperture radius must be positive")
    return intensity * math.pi * aperture_radius**2
