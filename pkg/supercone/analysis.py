# -*- coding: utf-8 -*-
"""Observables extracted from density grids.

Line and radial profiles, ring radii and thicknesses, widths of conditional
spots, a rotational symmetry measure and the geometric estimate of how much
the pump azimuth varies across one point of the overlapping ring.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import ndimage, signal

from .amplitude import ProcessKind, ProcessSpec
from .common import LOGGER
from .crystal import PolarizationClass, UniaxialCrystal, directional_index
from .engine import DensityGrid
from .errors import PreconditionError
from .kinematics import PumpSpec, directions, frame_rows

#: Rings less prominent than this fraction of the global maximum are ignored.
DEFAULT_PROMINENCE = 0.05

#: Annuli whose mean is below this fraction of the peak are not compared.
SYMMETRY_FLOOR = 0.01


class SliceAxis(enum.Enum):
    y_equals_0 = "y0"
    x_equals_0 = "x0"


@dataclasses.dataclass(frozen=True, eq=False)
class Profile:
    """One-dimensional profile of a density grid."""

    #: Positions (meters) of the samples, ascending.
    coordinates: np.ndarray
    values: np.ndarray

    #: Spacing of the underlying grid, in meters.
    cell: float


@dataclasses.dataclass(frozen=True)
class RingMetrics:
    """A ring of a radial (or slice) profile."""

    #: Radius at the observation plane, in meters.
    radius: float

    #: Full width at half maximum, in meters.
    fwhm_thickness: float

    #: Density at the top of the ring, per m².
    peak_density: float

    #: The half-maximum was not reached on both sides, or the ring spans at
    #: most two grid cells.
    under_resolved: bool = False

    def __post_init__(self) -> None:
        if not self.radius > 0 or not self.fwhm_thickness > 0:
            raise PreconditionError("Rings have a positive radius and thickness")


@dataclasses.dataclass(frozen=True)
class ConditionalWidths:
    """FWHM of a conditional spot, along the ring and across it."""

    fwhm_azimuthal: float
    fwhm_radial: float
    frac_of_circumference: float
    frac_of_ring_thickness: float

    #: Position (x, y) of the spot, in meters.
    peak: Tuple[float, float] = (0.0, 0.0)

    #: False for spots that are not resolved or barely stand out of the
    #: background.
    reliable: bool = True


class StandardCircles(NamedTuple):
    """Zero-mismatch emission of one Gaussian pump constituent.

    Points (x, y) at the observation plane, in meters.

    """

    signal: np.ndarray
    idler: np.ndarray


def slice_profile(grid: DensityGrid, axis: SliceAxis) -> Profile:
    """The grid row (or column) nearest to the requested axis."""
    coords = grid.grid.coordinates()
    idx = int(np.argmin(np.abs(coords)))
    if axis is SliceAxis.y_equals_0:
        values = grid.values[idx, :]
    else:
        values = grid.values[:, idx]
    return Profile(coords.copy(), np.array(values), grid.grid.step)


def _annuli(grid: DensityGrid) -> Tuple[np.ndarray, int]:
    """Annulus index of every cell (one cell wide) and the number kept."""
    spec = grid.grid
    x, y = spec.mesh()
    bins = np.floor(np.hypot(x, y) / spec.step).astype(np.intp)
    return bins, int(math.floor(spec.half_extent / spec.step)) + 1


def radial_profile(grid: DensityGrid) -> Profile:
    """Azimuthal average over annuli of one cell width around the axis."""
    bins, keep = _annuli(grid)
    sums = np.bincount(bins.ravel(), weights=grid.values.ravel())[:keep]
    counts = np.bincount(bins.ravel())[:keep]
    means = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
    step = grid.grid.step
    return Profile((np.arange(keep) + 0.5) * step, means, step)


def _half_crossing(
    values: np.ndarray, coords: np.ndarray, start: int, direction: int, half: float
) -> Optional[float]:
    """Position where values fall below ``half`` walking away from ``start``."""
    i = start
    while 0 <= i + direction < len(values):
        j = i + direction
        if values[j] < half:
            return coords[i] + (half - values[i]) * (coords[j] - coords[i]) / (
                values[j] - values[i]
            )
        i = j
    return None


def ring_metrics(
    profile: Profile, prominence: float = DEFAULT_PROMINENCE, min_cells: float = 2.0
) -> List[RingMetrics]:
    """Rings of a profile, by increasing position.

    Parameters
    ----------
    profile : Profile
    prominence : float
        Minimum prominence of a ring, relative to the global maximum.
    min_cells : float
        Rings not thicker than this many cells are flagged under-resolved.

    """
    v = profile.values
    coords = profile.coordinates
    top = float(v.max()) if v.size else 0.0
    if not top > 0:
        return []

    peaks, _ = signal.find_peaks(v, prominence=prominence * top)
    rings = []
    for p in peaks:
        if coords[p] == 0:
            # central spot of a slice, not a ring
            continue
        half = 0.5 * v[p]
        left = _half_crossing(v, coords, p, -1, half)
        right = _half_crossing(v, coords, p, 1, half)
        under = left is None or right is None
        left = coords[0] if left is None else left
        right = coords[-1] if right is None else right
        width = right - left
        if width <= min_cells * profile.cell:
            under = True
        if under:
            LOGGER.warning(
                "ring at %.4g m is under-resolved (FWHM %.3g m, cell %.3g m)",
                coords[p], width, profile.cell,
            )
        rings.append(RingMetrics(abs(float(coords[p])), float(width), float(v[p]), under))
    return rings


def _line_fwhm(grid: DensityGrid, x0: float, y0: float, e: np.ndarray) -> Tuple[float, bool]:
    """FWHM of the grid sampled on the line through (x0, y0) along e."""
    spec = grid.grid
    ds = 0.25 * spec.step
    t = np.arange(-4 * spec.n, 4 * spec.n + 1) * ds
    col = (x0 + t * e[0] + spec.half_extent) / spec.step
    row = (y0 + t * e[1] + spec.half_extent) / spec.step
    line = ndimage.map_coordinates(grid.values, [row, col], order=1, mode="constant", cval=0.0)
    center = len(t) // 2
    half = 0.5 * line[center]
    left = _half_crossing(line, t, center, -1, half)
    right = _half_crossing(line, t, center, 1, half)
    if left is None or right is None:
        return float(t[-1] - t[0]), False
    return float(right - left), True


def conditional_widths(
    grid: DensityGrid, ring: RingMetrics, min_contrast: float = 5.0
) -> ConditionalWidths:
    """Radial and azimuthal FWHM of the spot of a conditional density.

    The azimuthal width is measured on the tangent through the peak and
    converted to an arc length at the peak radius.

    Raises
    ------
    PreconditionError
        When the peak sits on the grid boundary or on the axis.

    """
    spec = grid.grid
    v = grid.values
    iy, ix = np.unravel_index(int(np.argmax(v)), v.shape)
    if iy in (0, spec.n - 1) or ix in (0, spec.n - 1):
        raise PreconditionError("The conditional peak lies on the grid boundary")
    c = spec.coordinates()
    x0, y0 = float(c[ix]), float(c[iy])
    r0 = math.hypot(x0, y0)
    if r0 == 0:
        raise PreconditionError("The conditional peak lies on the axis")

    e_r = np.array([x0, y0]) / r0
    e_t = np.array([-y0, x0]) / r0
    w_r, ok_r = _line_fwhm(grid, x0, y0, e_r)
    w_t, ok_t = _line_fwhm(grid, x0, y0, e_t)
    w_az = 2.0 * r0 * math.atan(0.5 * w_t / r0)

    frac_c = w_az / (2.0 * math.pi * ring.radius)
    frac_t = w_r / ring.fwhm_thickness
    contrast = float(v[iy, ix]) / float(v.mean()) if v.mean() > 0 else 0.0
    reliable = (
        ok_r and ok_t and contrast >= min_contrast and 0 < frac_c < 1 and 0 < frac_t < 1
    )
    if not reliable:
        LOGGER.warning(
            "conditional widths at (%.4g, %.4g) m are unreliable (contrast %.3g)",
            x0, y0, contrast,
        )
    return ConditionalWidths(w_az, w_r, frac_c, frac_t, (x0, y0), reliable)


def rotational_symmetry_error(grid: DensityGrid, floor: float = SYMMETRY_FLOOR) -> float:
    """Largest std/mean of the cells of an annulus, over the bright annuli."""
    bins, keep = _annuli(grid)
    bins = bins.ravel()
    values = grid.values.ravel()
    peak = float(values.max())
    if not peak > 0:
        return 0.0
    counts = np.bincount(bins)
    means = np.bincount(bins, weights=values) / np.maximum(counts, 1)
    dev = values - means[bins]
    std = np.sqrt(np.bincount(bins, weights=dev * dev) / np.maximum(counts, 1))
    bright = (counts[:keep] > 0) & (means[:keep] >= floor * peak)
    if not np.any(bright):
        return 0.0
    return float(np.max(std[:keep][bright] / means[:keep][bright]))


def _k_magnitude(
    crystal: UniaxialCrystal, wavelength: float, pol: PolarizationClass, s: np.ndarray
) -> np.ndarray:
    return 2.0 * math.pi * np.asarray(directional_index(crystal, wavelength, s, pol)) / wavelength


def standard_circles(
    crystal: UniaxialCrystal,
    process: ProcessSpec,
    pump: PumpSpec,
    z_obs: float,
    phi_p: float = 0.0,
    samples: int = 1440,
    alpha_max: float = 0.2,
) -> StandardCircles:
    """Signal and idler directions of exact phasematching for one constituent.

    The signal is parametrized by its angle α to the pump direction and its
    azimuth ψ around it; the idler carries the opposite transverse momentum.
    For every ψ the smallest α > 0 with zero longitudinal mismatch is found
    by bisection; azimuths without such α are not on the circle.

    """
    n_p = directional_index(
        crystal,
        pump.lambda_p,
        directions(np.asarray(pump.theta_p), np.asarray(phi_p)),
        PolarizationClass.extraordinary,
    )
    k_p = 2.0 * math.pi * n_p / pump.lambda_p
    rows = frame_rows(pump.theta_p, phi_p)
    e1, e2, p_hat = rows[0], rows[1], rows[2]

    def around(alpha: np.ndarray, psi: np.ndarray) -> np.ndarray:
        ca, sa = np.cos(alpha)[..., None], np.sin(alpha)[..., None]
        return ca * p_hat + sa * (np.cos(psi)[..., None] * e1 + np.sin(psi)[..., None] * e2)

    def mismatch(alpha: np.ndarray, psi: np.ndarray):
        s_dir = around(alpha, psi)
        k_s = _k_magnitude(crystal, process.lambda_s, process.signal_pol, s_dir)
        k_t = k_s * np.sin(alpha)
        k_i = _k_magnitude(crystal, process.lambda_i, process.idler_pol, around(0 * alpha, psi))
        for _ in range(4):
            alpha_i = np.arcsin(np.clip(k_t / k_i, -1.0, 1.0))
            i_dir = around(alpha_i, psi + math.pi)
            k_i = _k_magnitude(crystal, process.lambda_i, process.idler_pol, i_dir)
        return k_s * np.cos(alpha) + k_i * np.cos(alpha_i) - k_p, s_dir, i_dir

    psi = 2.0 * math.pi * np.arange(samples) / samples
    alpha = np.linspace(1e-4, alpha_max, 400)
    aa, pp = np.meshgrid(alpha, psi)
    f, _, _ = mismatch(aa, pp)
    change = np.signbit(f[:, :-1]) != np.signbit(f[:, 1:])
    has_root = np.any(change, axis=1)
    first = np.argmax(change, axis=1)[has_root]
    psi = psi[has_root]
    lo = alpha[first]
    hi = alpha[first + 1]
    f_lo = f[has_root, first]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f_mid, _, _ = mismatch(mid, psi)
        same = np.signbit(f_mid) == np.signbit(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, f_mid, f_lo)
        hi = np.where(same, hi, mid)
    _, s_dir, i_dir = mismatch(0.5 * (lo + hi), psi)

    def project(d: np.ndarray) -> np.ndarray:
        return z_obs * d[:, :2] / d[:, 2:3]

    return StandardCircles(project(s_dir), project(i_dir))


def polarization_spread_estimate(
    crystal: UniaxialCrystal,
    process: ProcessSpec,
    pump: PumpSpec,
    ring: RingMetrics,
    z_obs: float,
    sweep: float = math.radians(15.0),
    resolution: float = math.radians(0.005),
) -> float:
    """Range of pump azimuths contributing to one point of the overlapping ring.

    The point sits on the ring at azimuth 0. A pump constituent at φ_p
    contributes when the point lies within half the ring thickness of both
    its signal and its idler circle; the circles of φ_p are those of φ_p = 0
    rotated by φ_p.

    Returns
    -------
    float
        Width, in radians, of the contributing φ_p interval; 0 when none does.

    """
    if process.kind is not ProcessKind.type_ii:
        raise PreconditionError("The spread estimate applies to type-II processes")
    circles = standard_circles(crystal, process, pump, z_obs)
    if len(circles.signal) == 0:
        return 0.0

    phis = np.arange(-sweep, sweep + 0.5 * resolution, resolution)
    points = ring.radius * np.stack([np.cos(phis), -np.sin(phis)], axis=-1)
    tolerance = 0.5 * ring.fwhm_thickness

    def distance(curve: np.ndarray) -> np.ndarray:
        d = points[:, None, :] - curve[None, :, :]
        return np.sqrt(np.min(np.sum(d * d, axis=-1), axis=1))

    covered = (distance(circles.signal) <= tolerance) & (distance(circles.idler) <= tolerance)
    if np.count_nonzero(covered) < 2:
        return 0.0
    inside = phis[covered]
    return float(inside.max() - inside.min())
