# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Specifications of the aperture trap and the optical lattice."""

from dataclasses import dataclass

import numpy as np

from src.errors import InvalidParameterError
from src.models.enums import DepthNormalization
from src.models.grid import Grid


@dataclass(frozen=True)
class ApertureSpec:
    """Circular aperture illuminated by a red-detuned plane wave.

    Lengths are in the grid's length unit and depth in its energy unit.
    """

    radius: float
    wavelength: float
    depth: float
    quadrature_order: int = 64
    normalization: DepthNormalization = DepthNormalization.INCIDENT

    def __post_init__(self) -> None:
        """Validate the aperture geometry and quadrature order."""
        if not self.radius > 0 or not self.wavelength > 0:
            raise InvalidParameterError("Aperture radius and wavelength must be > 0")
        if self.depth < 0:
            raise InvalidParameterError("Aperture trap depth must be >= 0")
        if self.quadrature_order < 16:
            raise InvalidParameterError("quadrature_order must be at least 16")

    @property
    def wavenumber(self) -> float:
        """Trap-light wavenumber k_F."""
        return 2.0 * np.pi / self.wavelength


@dataclass(frozen=True)
class LatticeSpec:
    """Standing-wave lattice along x with a Gaussian transverse envelope."""

    depth: float
    wavelength: float
    waist: float
    center: float

    def __post_init__(self) -> None:
        """Validate the lattice definition."""
        if self.depth < 0:
            raise InvalidParameterError("Lattice depth must be >= 0")
        if not self.wavelength > 0 or not self.waist > 0:
            raise InvalidParameterError("Lattice wavelength and waist must be > 0")

    @property
    def wavenumber(self) -> float:
        """Lattice-light wavenumber k_OL."""
        return 2.0 * np.pi / self.wavelength

    @property
    def lattice_constant(self) -> float:
        """Distance between neighbouring wells."""
        return self.wavelength / 2.0


@dataclass(frozen=True, eq=False)
class NFFDField:
    """Diffracted field behind the aperture and the trap potential it forms.

    values is the relative field E/E_0; potential is U_F in the
    spec's energy unit (non-positive everywhere).
    """

    grid: Grid
    spec: ApertureSpec
    values: np.ndarray
    potential: np.ndarray

    @property
    def intensity(self) -> np.ndarray:
        """Relative intensity |E/E_0|^2."""
        return np.abs(self.values) ** 2
