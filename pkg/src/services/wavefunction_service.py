# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Normalization, overlaps and simple states on a grid."""

import numpy as np
from scipy import fft

from src.errors import DegenerateStateError, InvalidParameterError
from src.models.grid import Grid, Wavefunction


def normalize(psi: Wavefunction) -> Wavefunction:
    """Return psi scaled to unit norm."""
    norm_sq = psi.norm_squared()
    if not norm_sq > 0 or not np.isfinite(norm_sq):
        raise DegenerateStateError("Cannot normalize a zero-norm wavefunction")
    return Wavefunction(psi.grid, psi.amplitudes / np.sqrt(norm_sq))


def inner_product(phi: Wavefunction, psi: Wavefunction) -> complex:
    """<phi|psi> with the grid quadrature weight."""
    phi.grid.require_compatible(psi.grid)
    return complex(np.vdot(phi.amplitudes, psi.amplitudes) * psi.grid.cell_volume)


def overlap_fidelity(psi: Wavefunction, phi: Wavefunction) -> float:
    """Squared overlap |<phi|psi>|^2 in [0, 1].

    The overlap is divided by both norms, so identical states give exactly 1
    and the result is symmetric and blind to global phases.
    """
    psi.grid.require_compatible(phi.grid)
    cross = np.vdot(phi.amplitudes, psi.amplitudes)
    norm_phi = np.vdot(phi.amplitudes, phi.amplitudes).real
    norm_psi = np.vdot(psi.amplitudes, psi.amplitudes).real
    if norm_phi <= 0 or norm_psi <= 0:
        raise DegenerateStateError("Fidelity of a zero-norm state is undefined")
    value = abs(cross) ** 2 / (norm_phi * norm_psi)
    return float(min(max(value, 0.0), 1.0))


def gaussian_state(
    grid: Grid,
    center: tuple[float, ...] | None = None,
    width: float | tuple[float, ...] = 1.0,
    momentum: tuple[float, ...] | None = None,
) -> Wavefunction:
    """Normalized Gaussian exp(-(r - c)^2 / 2 s^2 + i k.r).

    width is the oscillator length s per sampled axis, so |psi|^2 has
    standard deviation s / sqrt(2).
    """
    dims = grid.dimensionality
    centers = center if center is not None else (0.0,) * dims
    widths = width if isinstance(width, tuple) else (width,) * dims
    kicks = momentum if momentum is not None else (0.0,) * dims
    if not len(centers) == len(widths) == len(kicks) == dims:
        raise InvalidParameterError(
            "Center, width and momentum need one entry per axis"
        )
    if min(widths) <= 0:
        raise InvalidParameterError("Gaussian width must be positive")
    mesh = np.meshgrid(*(axis.coordinates() for axis in grid.axes), indexing="ij")
    exponent = np.zeros(grid.shape, dtype=np.complex128)
    for coord, c, s, k in zip(mesh, centers, widths, kicks, strict=True):
        exponent += -((coord - c) ** 2) / (2.0 * s**2) + 1j * k * coord
    return normalize(Wavefunction(grid, np.exp(exponent)))


def translate(psi: Wavefunction, shift: float, axis: str = "x") -> Wavefunction:
    """Shift psi by shift along an axis with an exact spectral phase."""
    index = psi.grid.axis_index(axis)
    k = psi.grid.axes[index].wavenumbers()
    phase_shape = [1] * psi.grid.dimensionality
    phase_shape[index] = k.size
    phase = np.exp(-1j * k * shift).reshape(phase_shape)
    spectrum = fft.fft(psi.amplitudes, axis=index)
    return Wavefunction(psi.grid, fft.ifft(spectrum * phase, axis=index))


def expectation_position(psi: Wavefunction, axis: str = "x") -> float:
    """<r_axis> for a normalized state."""
    psi.grid.axis(axis)
    coords = psi.grid.cartesian()["xyz".index(axis)]
    density = psi.density()
    return float(np.sum(coords * density) / np.sum(density))


def position_width(psi: Wavefunction, axis: str = "x") -> float:
    """Standard deviation of the position distribution along an axis."""
    psi.grid.axis(axis)
    coords = psi.grid.cartesian()["xyz".index(axis)]
    density = psi.density()
    total = np.sum(density)
    mean = np.sum(coords * density) / total
    return float(np.sqrt(np.sum((coords - mean) ** 2 * density) / total))
