# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Exception hierarchy shared by all services."""


class AtomGateError(Exception):
    """Base class for every error raised by the simulator."""


class InvalidParameterError(AtomGateError, ValueError):
    """A physical or numerical parameter is outside its valid range."""


class DegenerateStateError(AtomGateError, ValueError):
    """A wavefunction has zero norm and cannot be normalized."""


class IncompatibleGridError(AtomGateError, ValueError):
    """Two fields that must share a grid do not."""


class SingularKernelError(AtomGateError, ValueError):
    """The diffraction kernel was requested on or below the aperture plane."""


class ScheduleRangeError(AtomGateError, ValueError):
    """A schedule was evaluated outside its time domain."""


class InvalidStateError(AtomGateError, ValueError):
    """A wavefunction does not satisfy the precondition of an operation."""


class TransportDomainError(AtomGateError, ValueError):
    """The transport distance does not fit on the simulation grid."""


class ConvergenceError(AtomGateError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float) -> None:
        """Initialize with the residual at the point of failure."""
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class InstabilityError(AtomGateError, RuntimeError):
    """Real-time propagation lost unitarity."""

    def __init__(self, norm_drift: float) -> None:
        """Initialize with the observed norm drift."""
        super().__init__(
            f"Norm drift {norm_drift:.3e} exceeds tolerance; use a smaller dt"
        )
        self.norm_drift = norm_drift


class TargetNotReachedError(AtomGateError, RuntimeError):
    """A fidelity target was not reached inside the search bracket."""

    def __init__(self, target: float, max_fidelity: float) -> None:
        """Initialize with the best fidelity seen during the scan."""
        super().__init__(
            f"Fidelity {target} not reached; best observed {max_fidelity:.6f}"
        )
        self.max_fidelity = max_fidelity


class ConfigError(AtomGateError, ValueError):
    """A scenario file could not be parsed or validated."""

    def __init__(
        self,
        message: str,
        key: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        """Initialize with the offending key or source position."""
        super().__init__(message)
        self.key = key
        self.line = line
        self.column = column
