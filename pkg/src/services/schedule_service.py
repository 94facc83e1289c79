# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Time laws of the trap ramp and the lattice polarization angle."""

import math

from src.errors import ScheduleRangeError
from src.models.enums import RampDirection
from src.models.schedule import RampSchedule, ThetaSchedule

_EDGE_TOLERANCE = 1e-12


def _check_range(t: float, duration: float) -> float:
    slack = _EDGE_TOLERANCE * max(1.0, duration)
    if t < -slack or t > duration + slack:
        raise ScheduleRangeError(f"t = {t} lies outside [0, {duration}]")
    return min(max(t, 0.0), duration)


def ramp_multiplier(schedule: RampSchedule, t: float) -> float:
    """Fraction of the trap depth present at time t.

    Switch-off follows cos^2(pi t / 2 T_F); switch-on is its complement
    sin^2(pi t / 2 T_F). A zero-length ramp returns its final value.
    """
    t = _check_range(t, schedule.duration)
    if schedule.duration == 0:
        progress = 1.0
    else:
        progress = math.sin(0.5 * math.pi * t / schedule.duration) ** 2
    if schedule.direction == RampDirection.ON:
        return progress
    return 1.0 - progress


def theta_schedule(schedule: ThetaSchedule, t: float) -> float:
    """Polarization angle n pi sin^2(pi t / 2 T_OL).

    The reversed schedule runs the same curve backwards, theta(T_OL - t).
    """
    t = _check_range(t, schedule.duration)
    if schedule.reverse:
        t = schedule.duration - t
    if schedule.duration == 0:
        return 0.0 if schedule.reverse else schedule.n * math.pi
    return schedule.n * math.pi * math.sin(0.5 * math.pi * t / schedule.duration) ** 2
