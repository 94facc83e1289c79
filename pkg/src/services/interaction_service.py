# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Collisional phase of two atoms sharing one lattice well."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy import constants

from src.errors import InvalidParameterError, InvalidStateError
from src.models.gate import TwoQubitGate
from src.models.grid import Wavefunction
from src.models.params import ScaledUnits
from src.schemas.results import InteractionReport

logger = logging.getLogger(__name__)

_NORM_TOLERANCE = 1e-6


def quartic_integral(states: Wavefunction | Sequence[Wavefunction]) -> float:
    """Integral of |psi|^4 for one state or a separable product of factors."""
    factors = [states] if isinstance(states, Wavefunction) else list(states)
    if not factors:
        raise InvalidStateError("No wavefunction supplied")
    total = 1.0
    for psi in factors:
        norm = psi.norm_squared()
        if abs(norm - 1.0) > _NORM_TOLERANCE:
            raise InvalidStateError(
                f"Interaction energy needs a normalized state (norm^2 = {norm:.6g})"
            )
        total *= float(np.sum(psi.density() ** 2) * psi.grid.cell_volume)
    return total


def interaction_ratio(
    states: Wavefunction | Sequence[Wavefunction], scattering_length: float
) -> float:
    """E_int / E_r = (2 a_s / pi) int |psi|^4 with lengths in lattice wavelengths."""
    if scattering_length < 0:
        raise InvalidParameterError("Scattering length must be >= 0")
    return 2.0 * scattering_length * quartic_integral(states) / math.pi


def hold_time(frequency: float, phase: float = math.pi) -> float:
    """Time phase / (2 pi nu) for the pair to accumulate phase."""
    if not frequency > 0:
        raise InvalidParameterError("Interaction frequency must be positive")
    if phase < 0:
        raise InvalidParameterError("Phase must be >= 0")
    return phase / (2.0 * math.pi * frequency)


def interaction_energy(
    states: Wavefunction | Sequence[Wavefunction],
    scattering_length: float,
    units: ScaledUnits,
    phase: float = math.pi,
    frequency_hz: float | None = None,
) -> InteractionReport:
    """Interaction energy of a doubly occupied well and the matching hold time.

    Args:
        states: Normalized 3-D well ground state, or its x, y and z factors.
        scattering_length: s-wave scattering length in meters.
        units: Scaled unit system of the states.
        phase: Phase to accumulate (pi for a controlled-Z).
        frequency_hz: Interaction frequency to use for the hold time instead
            of the computed one.
    """
    ratio = interaction_ratio(states, units.length_to_scaled(scattering_length))
    computed = units.energy_to_frequency(ratio)
    frequency = frequency_hz if frequency_hz is not None else computed
    t_hold = hold_time(frequency, phase)
    logger.info(
        f"E_int/E_r = {ratio:.5f} ({computed:.1f} Hz); hold time "
        f"{t_hold * 1e3:.4f} ms at {frequency:.1f} Hz"
    )
    return InteractionReport(
        interaction_ratio=ratio,
        frequency_hz=frequency,
        hold_time_s=t_hold,
        hold_time_tau=units.time_to_scaled(t_hold),
        phase=phase,
        frequency_supplied=frequency_hz is not None,
    )


def interaction_energy_joules(
    states: Wavefunction | Sequence[Wavefunction],
    scattering_length: float,
    mass: float,
    length_unit: float,
) -> float:
    """U_int = (4 pi hbar^2 a_s / m) int |psi|^4 in joules (states in scaled units)."""
    density = quartic_integral(states) / length_unit**3
    return 4.0 * math.pi * constants.hbar**2 * scattering_length / mass * density


def gate_unitary(phase: float = math.pi) -> TwoQubitGate:
    """diag(1, e^{i phase}, 1, 1) on |00>, |01>, |10>, |11>."""
    return TwoQubitGate(np.diag([1.0, np.exp(1j * phase), 1.0, 1.0]))
