# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Overall gate time and fidelity, and the lattice array capacity."""

import logging
import math

from src.errors import InvalidParameterError
from src.schemas.results import ArrayCapacity, GateBudget

logger = logging.getLogger(__name__)

# Steps 1, 2, 4 and 5 for each of the two atoms.
PROCESS_COUNT = 8
DEFAULT_PROCESS_FIDELITY = 0.99
PREVIOUS_PROPOSAL_FIDELITY = 0.886


def aggregate_budget(
    t_f: float,
    t_ol: float,
    t_hold: float,
    per_process_fidelity: float = DEFAULT_PROCESS_FIDELITY,
) -> GateBudget:
    """Combine step durations and the per-process fidelity.

    Times may be given in any common unit; the total uses the same unit.
    """
    if min(t_f, t_ol, t_hold) < 0:
        raise InvalidParameterError("Step durations must be >= 0")
    if not 0.0 <= per_process_fidelity <= 1.0:
        raise InvalidParameterError("Per-process fidelity must lie in [0, 1]")
    return GateBudget(
        t_f=t_f,
        t_ol=t_ol,
        t_hold=t_hold,
        per_process_fidelity=per_process_fidelity,
        total_time=2.0 * (t_f + t_ol) + t_hold,
        overall_fidelity=per_process_fidelity**PROCESS_COUNT,
        previous_proposal_fidelity=PREVIOUS_PROPOSAL_FIDELITY,
    )


def array_capacity(waist: float, wavelength: float, site_pitch: float) -> ArrayCapacity:
    """Rayleigh range pi w^2 / lambda of the lattice beam and the sites in 2 x_R.

    The count is inclusive of both end sites: a span of L holds floor(L / pitch)
    pitches and floor(L / pitch) + 1 apertures.
    """
    if min(waist, wavelength, site_pitch) <= 0:
        raise InvalidParameterError("Waist, wavelength and pitch must be positive")
    rayleigh = math.pi * waist**2 / wavelength
    usable = 2.0 * rayleigh
    count = math.floor(usable / site_pitch) + 1
    logger.debug(f"Rayleigh length {rayleigh:.3e} m holds {count} sites")
    return ArrayCapacity(
        rayleigh_length=rayleigh,
        usable_length=usable,
        site_pitch=site_pitch,
        qubit_count=count,
    )
