# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Uniform Cartesian grids and wavefunctions sampled on them."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.errors import IncompatibleGridError, InvalidParameterError

CARTESIAN_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Axis:
    """One uniformly sampled, periodic axis.

    Points sit at ``lower + j * spacing`` for ``j = 0 .. points - 1``; the upper
    bound is excluded so the axis tiles periodically for spectral stepping.
    """

    name: str
    lower: float
    upper: float
    points: int

    def __post_init__(self) -> None:
        """Validate the axis definition."""
        if self.name not in CARTESIAN_AXES:
            raise InvalidParameterError(f"Unknown axis name '{self.name}'")
        if self.points < 2:
            raise InvalidParameterError("An axis needs at least two points")
        if not self.upper > self.lower:
            raise InvalidParameterError(
                f"Axis {self.name}: upper bound must exceed lower bound"
            )

    @property
    def spacing(self) -> float:
        """Distance between neighbouring points."""
        return (self.upper - self.lower) / self.points

    @property
    def extent(self) -> float:
        """Length of the periodic cell."""
        return self.upper - self.lower

    def coordinates(self) -> np.ndarray:
        """Sample positions along the axis."""
        return self.lower + self.spacing * np.arange(self.points)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)


@dataclass(frozen=True)
class Grid:
    """A line, plane or volume of sample points in scaled units.

    ``axes`` lists the sampled Cartesian directions in x, y, z order; absent
    directions take their coordinate from ``anchor``. A 1-D grid along x at
    ``anchor = (0, 0, z_m)`` is the lattice axis through the trap minimum.
    """

    axes: tuple[Axis, ...]
    anchor: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        """Validate dimensionality and axis order."""
        if not 1 <= len(self.axes) <= 3:
            raise InvalidParameterError("Grid dimensionality must be 1, 2 or 3")
        names = [axis.name for axis in self.axes]
        if names != [n for n in CARTESIAN_AXES if n in names]:
            raise InvalidParameterError(
                f"Axes must be unique and ordered x, y, z; got {names}"
            )

    @classmethod
    def build(
        cls,
        extents: dict[str, tuple[float, float]],
        points: int | dict[str, int],
        anchor: tuple[float, float, float] = (0.0, 0.0, 0.0),
    ) -> Grid:
        """Build a grid from per-axis extents and point counts."""
        axes = []
        for name in CARTESIAN_AXES:
            if name not in extents:
                continue
            lower, upper = extents[name]
            count = points[name] if isinstance(points, dict) else points
            axes.append(Axis(name, float(lower), float(upper), int(count)))
        return cls(tuple(axes), (float(anchor[0]), float(anchor[1]), float(anchor[2])))

    @property
    def dimensionality(self) -> int:
        """Number of sampled axes."""
        return len(self.axes)

    @property
    def names(self) -> tuple[str, ...]:
        """Names of the sampled axes."""
        return tuple(axis.name for axis in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape of fields on this grid."""
        return tuple(axis.points for axis in self.axes)

    @property
    def spacing(self) -> tuple[float, ...]:
        """Per-axis spacing."""
        return tuple(axis.spacing for axis in self.axes)

    @property
    def cell_volume(self) -> float:
        """Product of the spacings (quadrature weight)."""
        return float(np.prod(self.spacing))

    def axis(self, name: str) -> Axis:
        """Return the axis with the given name."""
        for axis in self.axes:
            if axis.name == name:
                return axis
        raise InvalidParameterError(f"Grid has no '{name}' axis")

    def axis_index(self, name: str) -> int:
        """Position of a named axis in the array layout."""
        return self.names.index(name)

    @cached_property
    def _mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.meshgrid(*(axis.coordinates() for axis in self.axes), indexing="ij")
        )

    def cartesian(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Full-shape x, y, z coordinate arrays, anchored on absent axes."""
        mesh = dict(zip(self.names, self._mesh, strict=True))
        coords = []
        for index, name in enumerate(CARTESIAN_AXES):
            if name in mesh:
                coords.append(mesh[name])
            else:
                coords.append(np.full(self.shape, self.anchor[index]))
        return coords[0], coords[1], coords[2]

    @cached_property
    def wavenumber_squared(self) -> np.ndarray:
        """Sum of squared angular wavenumbers on the FFT grid."""
        ks = np.meshgrid(*(axis.wavenumbers() for axis in self.axes), indexing="ij")
        result = sum(k**2 for k in ks)
        result.flags.writeable = False
        return result

    def require_compatible(self, other: Grid) -> None:
        """Raise if ``other`` samples different points."""
        if self != other:
            raise IncompatibleGridError("Fields are defined on different grids")


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Complex amplitudes on a grid; the array is stored read-only."""

    grid: Grid
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        """Copy the amplitudes into a read-only complex array."""
        values = np.array(self.amplitudes, dtype=np.complex128)
        if values.shape != self.grid.shape:
            raise IncompatibleGridError(
                f"Amplitude shape {values.shape} does not match grid {self.grid.shape}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "amplitudes", values)

    def norm_squared(self) -> float:
        """Integral of the probability density."""
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.cell_volume)

    def density(self) -> np.ndarray:
        """Probability density on the grid."""
        return np.abs(self.amplitudes) ** 2
