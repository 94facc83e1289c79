# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Aperture trap, optical lattice and their time-dependent composition.

The diffracted field behind a circular aperture is the first-kind
Rayleigh-Sommerfeld integral over the open disk,

    E(r) / E_0 = (1 / 2 pi) * int_disk e^{ikR} / R * z / R * (1 / R - ik) dA',

evaluated with a tensor Gauss-Legendre rule in polar coordinates. The field
is axially symmetric, so only distinct (rho, z) pairs of a grid are computed.
"""

import functools
import logging
import math
from abc import ABC, abstractmethod
from typing import NamedTuple

import numpy as np
from scipy import optimize
from scipy.special import roots_legendre

from src.errors import IncompatibleGridError, SingularKernelError
from src.models.enums import DepthNormalization, StateLabel
from src.models.grid import Grid
from src.models.potential import ApertureSpec, LatticeSpec, NFFDField
from src.models.schedule import RampSchedule, ThetaSchedule
from src.services.schedule_service import ramp_multiplier, theta_schedule

logger = logging.getLogger(__name__)

QUADRATURE_TOLERANCE = 1e-6
_CHUNK_NODES = 1 << 21
_CHECK_POINTS = 16

# Hyperfine amplitudes on the sigma+ and sigma- components.
_HYPERFINE_AMPLITUDES: dict[StateLabel, tuple[float, float]] = {
    StateLabel.ZERO: (-0.5, math.sqrt(3.0) / 2.0),
    StateLabel.ONE: (math.sqrt(3.0) / 2.0, 0.5),
}


# ---------------------------------------------------------------------------
# Aperture trap
# ---------------------------------------------------------------------------


def _disk_nodes(
    radius: float, order: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Polar Gauss-Legendre nodes (x', y') and weights r' dr' dphi' on the disk."""
    r_nodes, r_weights = roots_legendre(order)
    phi_nodes, phi_weights = roots_legendre(order)
    r = 0.5 * radius * (r_nodes + 1.0)
    phi = math.pi * (phi_nodes + 1.0)
    wr = 0.5 * radius * r_weights * r
    wphi = math.pi * phi_weights
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    weights = np.outer(wr, wphi)
    return (rr * np.cos(pp)).ravel(), (rr * np.sin(pp)).ravel(), weights.ravel()


def _diffraction_integral(
    rho: np.ndarray, z: np.ndarray, wavenumber: float, radius: float, order: int
) -> np.ndarray:
    """Relative field at observation points (rho, 0, z)."""
    xs, ys, weights = _disk_nodes(radius, order)
    result = np.empty(rho.shape, dtype=np.complex128)
    chunk = max(1, _CHUNK_NODES // xs.size)
    for start in range(0, rho.size, chunk):
        sl = slice(start, start + chunk)
        dx = rho[sl, None] - xs[None, :]
        zz = z[sl, None]
        dist = np.sqrt(dx**2 + ys[None, :] ** 2 + zz**2)
        kernel = np.exp(1j * wavenumber * dist) / dist * (zz / dist)
        kernel *= 1.0 / dist - 1j * wavenumber
        result[sl] = kernel @ weights
    return result / (2.0 * math.pi)


def on_axis_field(spec: ApertureSpec, z: np.ndarray | float) -> np.ndarray:
    """Closed-form on-axis field e^{ikz} - (z / R) e^{ikR}, R = sqrt(z^2 + a^2)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise SingularKernelError("The aperture field is only defined for z > 0")
    k = spec.wavenumber
    rim = np.sqrt(z**2 + spec.radius**2)
    return np.exp(1j * k * z) - (z / rim) * np.exp(1j * k * rim)


@functools.cache
def locate_trap_minimum(spec: ApertureSpec) -> float:
    """Distance z* of the deepest on-axis point of the trap."""
    z_max = 2.0 * max(spec.radius**2 / spec.wavelength, spec.wavelength) + spec.radius
    scan = np.linspace(1e-3 * spec.wavelength, z_max, 8001)
    intensity = np.abs(on_axis_field(spec, scan)) ** 2
    best = int(np.argmax(intensity))
    lower = scan[max(best - 1, 0)]
    upper = scan[min(best + 1, scan.size - 1)]
    result = optimize.minimize_scalar(
        lambda zz: -float(np.abs(on_axis_field(spec, zz)) ** 2),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": 1e-12 * z_max},
    )
    return float(result.x)


def peak_intensity(spec: ApertureSpec) -> float:
    """Relative intensity |E / E_0|^2 at the on-axis trap minimum."""
    return float(np.abs(on_axis_field(spec, locate_trap_minimum(spec))) ** 2)


@functools.cache
def nffd_field(spec: ApertureSpec, grid: Grid) -> NFFDField:
    """Diffracted field and trap potential on a grid above the aperture.

    Args:
        spec: Aperture geometry, wavelength, depth and quadrature order.
        grid: Line, plane or volume with z > 0 everywhere.

    Returns:
        The relative field and U_F = -U_0 |E / E_0|^2 (rescaled to -U_0 at
        the on-axis minimum under ``DepthNormalization.PEAK``).

    Raises:
        SingularKernelError: If any sample point has z <= 0.
    """
    x, y, z = grid.cartesian()
    if np.any(z <= 0):
        raise SingularKernelError(
            "Grid touches the aperture plane; the kernel is singular at z <= 0"
        )
    rho = np.hypot(x, y)
    pairs, inverse = np.unique(
        np.stack([rho.ravel(), z.ravel()], axis=1), axis=0, return_inverse=True
    )
    logger.info(
        f"Evaluating aperture field at {len(pairs)} distinct (rho, z) points "
        f"with order {spec.quadrature_order}"
    )
    values = _diffraction_integral(
        pairs[:, 0], pairs[:, 1], spec.wavenumber, spec.radius, spec.quadrature_order
    )
    _check_quadrature(spec, pairs, values)

    field = values[inverse.ravel()].reshape(grid.shape)
    intensity = np.abs(field) ** 2
    if spec.normalization == DepthNormalization.PEAK:
        intensity = intensity / peak_intensity(spec)
    potential = -spec.depth * intensity
    field.flags.writeable = False
    potential.flags.writeable = False
    return NFFDField(grid=grid, spec=spec, values=field, potential=potential)


def _check_quadrature(
    spec: ApertureSpec, pairs: np.ndarray, values: np.ndarray
) -> None:
    """Warn when doubling the quadrature order moves a subsample of points."""
    picks = np.unique(np.linspace(0, len(pairs) - 1, _CHECK_POINTS).astype(int))
    refined = _diffraction_integral(
        pairs[picks, 0],
        pairs[picks, 1],
        spec.wavenumber,
        spec.radius,
        2 * spec.quadrature_order,
    )
    scale = max(float(np.max(np.abs(refined))), 1e-300)
    change = float(np.max(np.abs(refined - values[picks]))) / scale
    if change > QUADRATURE_TOLERANCE:
        logger.warning(
            f"Aperture quadrature not converged: doubling the order changes the "
            f"field by {change:.2e} (tolerance {QUADRATURE_TOLERANCE:.0e})"
        )


# ---------------------------------------------------------------------------
# Optical lattice
# ---------------------------------------------------------------------------


def envelope(spec: LatticeSpec, grid: Grid) -> np.ndarray:
    """Gaussian transverse factor exp(-2 (y^2 + (z - z_m)^2) / w^2)."""
    _, y, z = grid.cartesian()
    return np.exp(-2.0 * (y**2 + (z - spec.center) ** 2) / spec.waist**2)


def lattice_potential(spec: LatticeSpec, grid: Grid) -> np.ndarray:
    """Standing-wave lattice -V_0 cos^2(k x) times the transverse envelope."""
    x, _, _ = grid.cartesian()
    return -spec.depth * np.cos(spec.wavenumber * x) ** 2 * envelope(spec, grid)


def clebsch_gordan_weights() -> dict[StateLabel, tuple[float, float]]:
    """Weights (w_plus, w_minus) of the sigma+/sigma- lattices per qubit state."""
    return {
        label: (plus**2, minus**2)
        for label, (plus, minus) in _HYPERFINE_AMPLITUDES.items()
    }


class StatePotentials(NamedTuple):
    """Circular-polarization lattices and the effective qubit-state potentials."""

    plus: np.ndarray
    minus: np.ndarray
    zero: np.ndarray
    one: np.ndarray


def state_potentials(spec: LatticeSpec, theta: float, grid: Grid) -> StatePotentials:
    """Lattices V+/- = -V_0 cos^2(k x -/+ theta) env and their weighted sums."""
    x, _, _ = grid.cartesian()
    env = envelope(spec, grid)
    k = spec.wavenumber
    plus = -spec.depth * np.cos(k * x - theta) ** 2 * env
    minus = -spec.depth * np.cos(k * x + theta) ** 2 * env
    weights = clebsch_gordan_weights()
    w0p, w0m = weights[StateLabel.ZERO]
    w1p, w1m = weights[StateLabel.ONE]
    return StatePotentials(
        plus=plus,
        minus=minus,
        zero=w0p * plus + w0m * minus,
        one=w1p * plus + w1m * minus,
    )


def state_potential(
    spec: LatticeSpec, theta: float, grid: Grid, label: StateLabel
) -> np.ndarray:
    """Effective lattice seen by one qubit state at polarization angle theta."""
    potentials = state_potentials(spec, theta, grid)
    return potentials.zero if label == StateLabel.ZERO else potentials.one


def isolate_well(
    potential: np.ndarray,
    grid: Grid,
    center: float,
    half_width: float,
    axis: str = "x",
) -> np.ndarray:
    """Flatten the potential to its maximum outside |r_axis - center| <= half_width.

    Used to pick one well of a periodic lattice as the initial or target well,
    so that relaxation does not spread the state over degenerate neighbours.
    """
    grid.axis(axis)
    coords = grid.cartesian()["xyz".index(axis)]
    walled = np.array(potential, dtype=float)
    walled[np.abs(coords - center) > half_width] = float(np.max(potential))
    return walled


# ---------------------------------------------------------------------------
# Time-dependent composition
# ---------------------------------------------------------------------------


class PotentialTerm(ABC):
    """One contribution to V(r, t) on a fixed grid."""

    grid: Grid

    @abstractmethod
    def evaluate(self, t: float) -> np.ndarray:
        """Field of this term at time t."""
        ...

    @property
    def is_static(self) -> bool:
        """True if the term does not change in time."""
        return False


class StaticTerm(PotentialTerm):
    """A fixed field."""

    def __init__(self, grid: Grid, field: np.ndarray) -> None:
        """Store a read-only copy of the field."""
        self.grid = grid
        self.field = np.array(field, dtype=float)
        if self.field.shape != grid.shape:
            raise IncompatibleGridError("Field shape does not match the grid")
        self.field.flags.writeable = False

    def evaluate(self, t: float) -> np.ndarray:
        """Return the field unchanged."""
        return self.field

    @property
    def is_static(self) -> bool:
        """Static terms never change."""
        return True


class RampedTerm(PotentialTerm):
    """A fixed field scaled by the trap ramp multiplier."""

    def __init__(self, grid: Grid, field: np.ndarray, schedule: RampSchedule) -> None:
        """Store the field and its ramp."""
        self.grid = grid
        self.field = np.array(field, dtype=float)
        if self.field.shape != grid.shape:
            raise IncompatibleGridError("Field shape does not match the grid")
        self.schedule = schedule

    def evaluate(self, t: float) -> np.ndarray:
        """Field times the ramp multiplier at t."""
        return ramp_multiplier(self.schedule, t) * self.field


class MovingLatticeTerm(PotentialTerm):
    """State-dependent lattice whose polarization angle follows theta(t).

    With w+ + w- = 1 the effective potential is

        -V_0 env [1/2 + 1/2 cos(2 theta) cos(2kx)
                  + 1/2 (w+ - w-) sin(2 theta) sin(2kx)],

    so the spatial basis is built once and each evaluation is a linear
    combination of three arrays.
    """

    def __init__(
        self,
        grid: Grid,
        spec: LatticeSpec,
        schedule: ThetaSchedule,
        label: StateLabel,
    ) -> None:
        """Precompute the spatial basis for one qubit state."""
        self.grid = grid
        self.spec = spec
        self.schedule = schedule
        self.label = label
        w_plus, w_minus = clebsch_gordan_weights()[label]
        x, _, _ = grid.cartesian()
        scaled_env = -0.5 * spec.depth * envelope(spec, grid)
        self._offset = scaled_env
        self._cos = scaled_env * np.cos(2.0 * spec.wavenumber * x)
        self._sin = (w_plus - w_minus) * scaled_env * np.sin(2.0 * spec.wavenumber * x)

    def theta(self, t: float) -> float:
        """Polarization angle at time t."""
        return theta_schedule(self.schedule, t)

    def evaluate(self, t: float) -> np.ndarray:
        """Effective lattice at time t."""
        two_theta = 2.0 * self.theta(t)
        return self._offset + math.cos(two_theta) * self._cos + math.sin(
            two_theta
        ) * self._sin


class TimeDependentPotential:
    """Sum of potential terms sharing one grid."""

    def __init__(self, grid: Grid, terms: tuple[PotentialTerm, ...] = ()) -> None:
        """Validate that every term lives on ``grid``."""
        for term in terms:
            if term.grid != grid:
                raise IncompatibleGridError("Potential terms use different grids")
        self.grid = grid
        self.terms = terms
        self._static = sum(
            (term.evaluate(0.0) for term in terms if term.is_static),
            start=np.zeros(grid.shape),
        )
        self._dynamic = tuple(term for term in terms if not term.is_static)

    @property
    def is_static(self) -> bool:
        """True when no term depends on time."""
        return not self._dynamic

    def __call__(self, t: float) -> np.ndarray:
        """Evaluate V(r, t) on the grid."""
        if not self._dynamic:
            return self._static
        total = self._static.copy()
        for term in self._dynamic:
            total += term.evaluate(t)
        return total


def compose(*terms: PotentialTerm, grid: Grid | None = None) -> TimeDependentPotential:
    """Combine terms into one potential; ``grid`` is required when empty."""
    if grid is None:
        if not terms:
            raise IncompatibleGridError("An empty composition needs an explicit grid")
        grid = terms[0].grid
    return TimeDependentPotential(grid, tuple(terms))
