# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Time schedules of the five-step gate."""

from dataclasses import dataclass

from src.errors import InvalidParameterError
from src.models.enums import RampDirection


@dataclass(frozen=True)
class RampSchedule:
    """cos^2 switch-off (or sin^2 switch-on) of the aperture trap over T_F."""

    duration: float
    direction: RampDirection = RampDirection.OFF

    def __post_init__(self) -> None:
        """Validate the ramp duration."""
        if self.duration < 0:
            raise InvalidParameterError("Ramp duration must be >= 0")


@dataclass(frozen=True)
class ThetaSchedule:
    """Polarization angle ramp theta(t) = n pi sin^2(pi t / 2 T_OL)."""

    n: int
    duration: float
    reverse: bool = False

    def __post_init__(self) -> None:
        """Validate the transport schedule."""
        if self.n < 0:
            raise InvalidParameterError("Transport count n must be >= 0")
        if self.duration < 0:
            raise InvalidParameterError("Transport duration must be >= 0")


@dataclass(frozen=True)
class GateSchedule:
    """Durations of the five steps (in units of tau) and the transport count."""

    t_f: float
    t_ol: float
    n: int
    t_hold: float
    atom_site_separation: int | None = None

    def __post_init__(self) -> None:
        """Validate the schedule."""
        if min(self.t_f, self.t_ol, self.t_hold) < 0:
            raise InvalidParameterError("Step durations must be >= 0")
        if self.n < 1:
            raise InvalidParameterError("n must be at least 1")

    @property
    def site_separation(self) -> int:
        """Sites between the chosen pair; 2n lets the components meet exactly."""
        if self.atom_site_separation is None:
            return 2 * self.n
        return self.atom_site_separation
