# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Two-qubit gate matrices."""

from dataclasses import dataclass

import numpy as np

BASIS_LABELS = ("00", "01", "10", "11")


@dataclass(frozen=True, eq=False)
class TwoQubitGate:
    """4x4 unitary on the basis |00>, |01>, |10>, |11>."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        """Store a read-only complex copy of the matrix."""
        values = np.array(self.matrix, dtype=np.complex128)
        if values.shape != (4, 4):
            raise ValueError("A two-qubit gate is a 4x4 matrix")
        values.flags.writeable = False
        object.__setattr__(self, "matrix", values)

    def is_unitary(self, atol: float = 1e-12) -> bool:
        """Check U^dagger U = I."""
        product = self.matrix.conj().T @ self.matrix
        return bool(np.allclose(product, np.eye(4), atol=atol, rtol=0.0))

    def is_diagonal(self) -> bool:
        """Check that all off-diagonal entries vanish."""
        return bool(np.all(self.matrix[~np.eye(4, dtype=bool)] == 0))

    def phases(self) -> np.ndarray:
        """Arguments of the diagonal entries."""
        return np.angle(np.diag(self.matrix))

    def __matmul__(self, other: TwoQubitGate) -> TwoQubitGate:
        """Compose two gates (self applied after other)."""
        return TwoQubitGate(self.matrix @ other.matrix)
