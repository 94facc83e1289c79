# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Result of a real-time propagation."""

from dataclasses import dataclass

from src.models.grid import Wavefunction


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Final state, fidelity trace (t/tau, F) and norm drift of a run."""

    final_state: Wavefunction
    fidelity_trace: tuple[tuple[float, float], ...]
    norm_drift: float
    steps: int
    dt: float

    @property
    def final_fidelity(self) -> float | None:
        """Fidelity at the last recorded time, if a reference was given."""
        if not self.fidelity_trace:
            return None
        return self.fidelity_trace[-1][1]
