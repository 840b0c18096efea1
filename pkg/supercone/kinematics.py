# -*- coding: utf-8 -*-
"""Observation grids, pump cone parametrization and frame rotations.

Directions are described by their polar angle θ from the optic axis z and
their azimuth φ from the crystal x-axis. The pump-local frame of the
constituent at azimuth φ_p has z' along its central wave vector, x' along
the azimuthal direction and y' = z' × x'.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import math
from typing import Tuple

import numpy as np

from .common import LOGGER
from .crystal import PolarizationClass, UniaxialCrystal, directional_index
from .errors import FrameMismatch, GridMismatch, PreconditionError

_TWO_PI = 2.0 * math.pi


class Frame(enum.Enum):
    """Coordinate frame a mismatch vector is expressed in."""

    crystal_xyz = "crystal_xyz"
    pump_local = "pump_local"


@dataclasses.dataclass(frozen=True)
class DirectionAngles:
    """Polar angle from z and azimuth from x, both in radians."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 0.5 * math.pi:
            raise PreconditionError("theta must lie in [0, pi/2), got %r" % self.theta)
        if not 0.0 <= self.phi < _TWO_PI:
            raise PreconditionError("phi must lie in [0, 2 pi), got %r" % self.phi)


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """Square grid of n × n points on a plane at z_obs from the crystal."""

    #: Samples per axis.
    n: int

    #: The grid spans [-half_extent, half_extent] on both axes, in meters.
    half_extent: float

    #: Distance of the observation plane, in meters.
    z_obs: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise PreconditionError("A grid needs at least 2 samples per axis")
        if not self.half_extent > 0 or not self.z_obs > 0:
            raise PreconditionError("half_extent and z_obs must be positive")

    @property
    def step(self) -> float:
        return 2.0 * self.half_extent / (self.n - 1)

    @property
    def cell_area(self) -> float:
        return self.step * self.step

    def coordinates(self) -> np.ndarray:
        """Sample positions along one axis, ascending, in meters."""
        return (np.arange(self.n) - 0.5 * (self.n - 1)) * self.step

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """X and Y of every sample, indexed [iy, ix]."""
        c = self.coordinates()
        return np.meshgrid(c, c, indexing="xy")

    def check_compatible(self, other: "GridSpec") -> None:
        if self != other:
            raise GridMismatch("Grids %r and %r differ" % (self, other))


@dataclasses.dataclass(frozen=True, eq=False)
class MismatchVector:
    """Wave-vector mismatch Δk (rad/m) tagged with its frame."""

    dk: np.ndarray
    frame: Frame

    def __post_init__(self) -> None:
        dk = np.array(self.dk, dtype=float)
        if dk.shape != (3,):
            raise PreconditionError("A mismatch vector has 3 components")
        object.__setattr__(self, "dk", dk)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.dk))


@dataclasses.dataclass(frozen=True)
class PumpSpec:
    """Bessel-Gauss pump cone sampled by m_phi Gaussian constituents."""

    #: Vacuum wavelength, in meters.
    lambda_p: float

    #: Cone half-angle inside the crystal, in radians.
    theta_p: float

    #: 1/e² full width of each Gaussian constituent, in meters.
    w_p: float

    #: Number of constituents, equally spaced in azimuth.
    m_phi: int

    def __post_init__(self) -> None:
        if not 0.0 < self.theta_p < 0.5 * math.pi:
            raise PreconditionError("theta_p must lie in (0, pi/2), got %r" % self.theta_p)
        if not self.w_p > 0 or not self.lambda_p > 0:
            raise PreconditionError("w_p and lambda_p must be positive")
        if self.m_phi < 1:
            raise PreconditionError("m_phi must be at least 1")
        if self.m_phi < 8:
            LOGGER.warning(
                "m_phi = %d samples the pump cone too coarsely for a Bessel-Gauss "
                "beam; results describe %d separate Gaussian beams",
                self.m_phi, self.m_phi,
            )

    def phi_samples(self) -> np.ndarray:
        """Azimuths 2πj/m_phi of the pump constituents."""
        return _TWO_PI * np.arange(self.m_phi) / self.m_phi


def angles_from_grid(x: float, y: float, z: float) -> DirectionAngles:
    """Direction from the crystal center to the point (x, y, z)."""
    if not z > 0:
        raise PreconditionError("z must be positive, got %r" % z)
    theta, phi = grid_angles(np.asarray(x, dtype=float), np.asarray(y, dtype=float), z)
    return DirectionAngles(float(theta), float(phi))


def grid_angles(x: np.ndarray, y: np.ndarray, z: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized θ and φ of grid points; φ = 0 on axis."""
    theta = np.arctan(np.hypot(x, y) / z)
    phi = np.mod(np.arctan2(y, x), _TWO_PI)
    phi = np.where(phi >= _TWO_PI, 0.0, phi)
    return theta, phi


def wrap_azimuth(phi: float) -> float:
    """Azimuth brought into [0, 2π)."""
    phi = math.fmod(phi, _TWO_PI)
    if phi < 0:
        phi += _TWO_PI
    return 0.0 if phi >= _TWO_PI else phi


def grid_point_from_angles(a: DirectionAngles, z: float) -> Tuple[float, float]:
    r = z * math.tan(a.theta)
    return r * math.cos(a.phi), r * math.sin(a.phi)


def direction_from_angles(a: DirectionAngles) -> np.ndarray:
    return directions(np.asarray(a.theta), np.asarray(a.phi))


def directions(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Unit vectors (sinθ cosφ, sinθ sinφ, cosθ) along the last axis."""
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def pump_central_k(pump: PumpSpec, phi_p: float, index: float) -> np.ndarray:
    """Central wave vector of the pump constituent at azimuth φ_p.

    ``index`` is the extraordinary index at (θ_p, λ_p), supplied by the caller.

    """
    return (_TWO_PI * index / pump.lambda_p) * directions(
        np.asarray(pump.theta_p), np.asarray(phi_p)
    )


def mismatch_crystal(k_s: np.ndarray, k_i: np.ndarray, k_p: np.ndarray) -> MismatchVector:
    """Δk = k_s + k_i - k_p in the crystal frame."""
    return MismatchVector(
        np.asarray(k_s) + np.asarray(k_i) - np.asarray(k_p), Frame.crystal_xyz
    )


def frame_rows(theta_p: float, phi_p: float) -> np.ndarray:
    """Rotation whose rows are x', y' and z' expressed in the crystal frame."""
    st, ct = math.sin(theta_p), math.cos(theta_p)
    sp, cp = math.sin(phi_p), math.cos(phi_p)
    return np.array(
        [
            [-sp, cp, 0.0],
            [-ct * cp, -ct * sp, st],
            [st * cp, st * sp, ct],
        ]
    )


def to_pump_frame(m: MismatchVector, theta_p: float, phi_p: float) -> MismatchVector:
    """Express a crystal-frame mismatch in the frame of one pump constituent."""
    if m.frame is not Frame.crystal_xyz:
        raise FrameMismatch(Frame.crystal_xyz, m.frame)
    return MismatchVector(frame_rows(theta_p, phi_p) @ m.dk, Frame.pump_local)


def pump_tables(
    crystal: UniaxialCrystal, pump: PumpSpec
) -> Tuple[np.ndarray, np.ndarray]:
    """Central wave vectors (m, 3) and frame rows (m, 3, 3) of every constituent."""
    index = directional_index(
        crystal,
        pump.lambda_p,
        directions(np.asarray(pump.theta_p), np.asarray(0.0)),
        PolarizationClass.extraordinary,
    )
    phis = pump.phi_samples()
    k_p = np.ascontiguousarray(
        np.stack([pump_central_k(pump, p, index) for p in phis])
    )
    rows = np.ascontiguousarray(np.stack([frame_rows(pump.theta_p, p) for p in phis]))
    return k_p, rows


def grid_wave_vectors(
    crystal: UniaxialCrystal, grid: GridSpec, wavelength: float, pol: PolarizationClass
) -> np.ndarray:
    """Wave vectors (n², 3) towards every grid point, flattened as iy·n + ix."""
    x, y = grid.mesh()
    theta, phi = grid_angles(x.ravel(), y.ravel(), grid.z_obs)
    s = directions(theta, phi)
    n = directional_index(crystal, wavelength, s, pol)
    return np.ascontiguousarray((_TWO_PI / wavelength) * np.asarray(n)[:, None] * s)
