# -*- coding: utf-8 -*-
"""Dispersion and direction dependent indices of uniaxial crystals.

Wavelengths are vacuum wavelengths in meters and angles are radians; the
conversion to micrometers happens only inside the Sellmeier evaluation.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import math
import pathlib
from importlib import resources
from typing import TYPE_CHECKING, Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np
import yaml
from scipy import optimize
from typing_extensions import Self

from .common import LOGGER
from .errors import (
    ConfigurationError,
    NotPhasematchable,
    PreconditionError,
    WavelengthOutOfBand,
)

if TYPE_CHECKING:
    from .amplitude import ProcessSpec

#: Default supported band of a dispersion model, in micrometers.
DEFAULT_BAND_UM = (0.35, 1.6)

#: Tolerance on the norm of propagation directions.
UNIT_TOLERANCE = 1e-12

#: Absolute tolerance, in radians, of the angle solvers.
ANGLE_XTOL = 1e-10

_HALF_PI = 0.5 * math.pi


class PolarizationClass(enum.Enum):
    """Polarization of a wave with respect to the plane of k and the optic axis."""

    #: Orthogonal to the plane containing the wave vector and the optic axis.
    ordinary = "o"

    #: In the plane containing the wave vector and the optic axis.
    extraordinary = "e"


class UniaxialSign(enum.Enum):
    negative = "negative"
    positive = "positive"


@dataclasses.dataclass(frozen=True)
class SellmeierModel:
    """Dispersion of one principal index.

    n²(λ) = a + b / (λ² - c) - d·λ², with λ the vacuum wavelength in µm.

    """

    a: float
    b: float
    c: float
    d: float

    #: Band (lo, hi) in micrometers on which the model may be evaluated.
    band_um: Tuple[float, float] = DEFAULT_BAND_UM

    def __post_init__(self) -> None:
        lo, hi = self.band_um
        if not 0 < lo < hi:
            raise ConfigurationError("Invalid band %r" % (self.band_um,))
        if lo * lo <= self.c <= hi * hi:
            raise ConfigurationError(
                "Sellmeier pole at %g um lies inside the band" % math.sqrt(self.c)
            )
        lam2 = np.linspace(lo, hi, 257) ** 2
        n2 = self.a + self.b / (lam2 - self.c) - self.d * lam2
        if np.any(n2 < 1.0):
            raise ConfigurationError(
                "Sellmeier model evaluates below n = 1 inside its band"
            )

    def index(self, wavelength: float) -> float:
        return principal_index(self, wavelength)


@dataclasses.dataclass(frozen=True)
class PrincipalIndices:
    """Principal indices of a crystal at one wavelength."""

    n_x: float
    n_y: float
    n_z: float

    #: Vacuum wavelength, in meters.
    wavelength: float


@dataclasses.dataclass(frozen=True)
class UniaxialCrystal:
    """A uniaxial crystal cut with its optic axis along the face normal z."""

    #: Dispersion of n_x = n_y = n_o.
    ordinary: SellmeierModel

    #: Dispersion of n_z = n_e.
    extraordinary: SellmeierModel

    #: Thickness along the face normal, in meters.
    length: float

    sign: UniaxialSign = UniaxialSign.negative
    name: str = ""

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ConfigurationError("Crystal length must be positive, got %r" % self.length)
        lo, hi = self.band_um
        for lam in np.linspace(lo, hi, 33) * 1e-6:
            n_o = principal_index(self.ordinary, lam)
            n_e = principal_index(self.extraordinary, lam)
            if (self.sign is UniaxialSign.negative and n_e > n_o) or (
                self.sign is UniaxialSign.positive and n_e < n_o
            ):
                raise ConfigurationError(
                    "%s crystal %r has n_o = %.6f and n_e = %.6f at %.4g um"
                    % (self.sign.value, self.name, n_o, n_e, lam * 1e6)
                )

    @property
    def band_um(self) -> Tuple[float, float]:
        """Band on which both principal indices are defined."""
        return (
            max(self.ordinary.band_um[0], self.extraordinary.band_um[0]),
            min(self.ordinary.band_um[1], self.extraordinary.band_um[1]),
        )

    def principal_indices(self, wavelength: float) -> PrincipalIndices:
        n_o = principal_index(self.ordinary, wavelength)
        return PrincipalIndices(
            n_o, n_o, principal_index(self.extraordinary, wavelength), wavelength
        )

    def with_length(self, length: float) -> Self:
        return dataclasses.replace(self, length=length)


def principal_index(model: SellmeierModel, wavelength: float) -> float:
    """Principal index of a Sellmeier model at a vacuum wavelength in meters."""
    lam = wavelength * 1e6
    lo, hi = model.band_um
    if not (lo * (1 - 1e-12) <= lam <= hi * (1 + 1e-12)):
        raise WavelengthOutOfBand(wavelength, model.band_um)
    lam2 = lam * lam
    return math.sqrt(model.a + model.b / (lam2 - model.c) - model.d * lam2)


def _unit_directions(s: Any) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape[-1:] != (3,):
        raise PreconditionError("Directions must have 3 components, got shape %r" % (s.shape,))
    norm = np.sqrt(np.sum(s * s, axis=-1))
    if np.any(np.abs(norm - 1.0) > UNIT_TOLERANCE):
        raise PreconditionError("Propagation direction is not a unit vector")
    return s


def directional_index(
    crystal: UniaxialCrystal, wavelength: float, s: Any, pol: PolarizationClass
) -> Union[float, np.ndarray]:
    """Phase index of a wave propagating along the unit direction(s) ``s``.

    The extraordinary index is the root of the index-ellipsoid eigenproblem
    u² - B·u + C = 0 with u = 1/N², B and C built from the squared direction
    cosines and a_j = 1/n_j². The quadratic is solved in v = u - a_x, whose
    roots (0 and the extraordinary shift) stay separated close to the optic
    axis.

    Parameters
    ----------
    crystal : UniaxialCrystal
    wavelength : float
        Vacuum wavelength in meters.
    s : array_like
        Unit direction, or an array of them along the last axis.
    pol : PolarizationClass

    Returns
    -------
    float or numpy.ndarray
        One index per direction.

    """
    s = _unit_directions(s)
    n_o = principal_index(crystal.ordinary, wavelength)
    if pol is PolarizationClass.ordinary:
        out = np.full(s.shape[:-1], n_o)
        return float(out) if out.ndim == 0 else out

    n_e = principal_index(crystal.extraordinary, wavelength)
    a_x = a_y = 1.0 / (n_o * n_o)
    a_z = 1.0 / (n_e * n_e)
    s = s / np.sqrt(np.sum(s * s, axis=-1))[..., None]
    p_x, p_y, p_z = s[..., 0] ** 2, s[..., 1] ** 2, s[..., 2] ** 2

    # B - 2 a_x and C - a_x B + a_x², with a_x = a_y
    b_shift = p_x * (a_z - a_x) + p_y * (a_z - a_y) + 2.0 * a_x * (p_x + p_y + p_z - 1.0)
    c_shift = a_x * a_x * (1.0 - (p_x + p_y + p_z))

    disc = np.sqrt(np.maximum(b_shift * b_shift - 4.0 * c_shift, 0.0))
    v = 0.5 * (b_shift + np.copysign(disc, b_shift))

    out = 1.0 / np.sqrt(a_x + v)
    return float(out) if out.ndim == 0 else out


def extraordinary_index_closed_form(n_o: float, n_e: float, theta: Any) -> Any:
    """1/N² = cos²θ/n_o² + sin²θ/n_e², θ measured from the optic axis."""
    c = np.cos(theta)
    s = np.sin(theta)
    return 1.0 / np.sqrt(c * c / (n_o * n_o) + s * s / (n_e * n_e))


def wave_vector(
    crystal: UniaxialCrystal, wavelength: float, s: Any, pol: PolarizationClass
) -> np.ndarray:
    """Wave vector (rad/m, crystal frame) of a plane wave along ``s``."""
    s = _unit_directions(s)
    n = directional_index(crystal, wavelength, s, pol)
    return (2.0 * math.pi / wavelength) * np.asarray(n)[..., None] * s


def _meridional(theta: float) -> np.ndarray:
    return np.array([math.sin(theta), 0.0, math.cos(theta)])


def walkoff_angle(crystal: UniaxialCrystal, wavelength: float, theta: float) -> float:
    """Angle between the Poynting vector and k of an extraordinary wave."""
    idx = crystal.principal_indices(wavelength)
    n = directional_index(
        crystal, wavelength, _meridional(theta), PolarizationClass.extraordinary
    )
    tan_rho = 0.5 * n * n * (1 / idx.n_z**2 - 1 / idx.n_x**2) * math.sin(2 * theta)
    return abs(math.atan(tan_rho))


def energy_match(lambda_p: float, lambda_s: float) -> float:
    """Idler wavelength conserving energy, 1/λ_i = 1/λ_p - 1/λ_s."""
    if not lambda_s > lambda_p:
        raise PreconditionError(
            "Signal wavelength %.6g m must be longer than the pump %.6g m"
            % (lambda_s, lambda_p)
        )
    return 1.0 / (1.0 / lambda_p - 1.0 / lambda_s)


def collinear_mismatch(
    crystal: UniaxialCrystal, process: "ProcessSpec", theta: float
) -> float:
    """Longitudinal mismatch (rad/m) of pump, signal and idler all along θ."""
    s = _meridional(theta)
    n_p = directional_index(crystal, process.lambda_p, s, process.pump_pol)
    n_s = directional_index(crystal, process.lambda_s, s, process.signal_pol)
    n_i = directional_index(crystal, process.lambda_i, s, process.idler_pol)
    return (
        2.0
        * math.pi
        * (n_s / process.lambda_s + n_i / process.lambda_i - n_p / process.lambda_p)
    )


def solve_phasematch_angle(
    crystal: UniaxialCrystal, lambda_p: float, process: "ProcessSpec"
) -> float:
    """Crystal angle at which the collinear process is phasematched.

    For the degenerate processes this reduces to N_e(θ, λ_p) = n_o(2λ_p)
    (type I) and N_e(θ, λ_p) = [n_o(2λ_p) + N_e(θ, 2λ_p)]/2 (type II).

    Raises
    ------
    NotPhasematchable
        When the mismatch does not change sign between 0 and 90 degrees.

    """
    if abs(lambda_p - process.lambda_p) > 1e-12 * lambda_p:
        raise ConfigurationError(
            "Pump wavelength %.6g m does not match the process (%.6g m)"
            % (lambda_p, process.lambda_p)
        )
    if process.pump_pol is not PolarizationClass.extraordinary:
        raise ConfigurationError("The pump must be extraordinarily polarized")

    lo = collinear_mismatch(crystal, process, 0.0)
    hi = collinear_mismatch(crystal, process, _HALF_PI)
    if lo * hi > 0:
        raise NotPhasematchable(
            "%s is not phasematchable in %s: collinear mismatch is %.4g rad/m at "
            "0 deg and %.4g rad/m at 90 deg"
            % (process.kind.value, crystal.name or "crystal", lo, hi)
        )
    theta = optimize.bisect(
        lambda t: collinear_mismatch(crystal, process, t),
        0.0,
        _HALF_PI,
        xtol=ANGLE_XTOL,
    )
    LOGGER.debug("phasematch angle %.6f deg", math.degrees(theta))
    return theta


def tir_angle(
    crystal: UniaxialCrystal,
    wavelength: float,
    pol: PolarizationClass,
    n_out: float = 1.0,
) -> Optional[float]:
    """Internal angle beyond which a ray cannot leave a face normal to z.

    The extraordinary index is evaluated self-consistently at the angle being
    tested. None is returned when every angle below 90 degrees exits.

    """
    if pol is PolarizationClass.ordinary:
        n_o = principal_index(crystal.ordinary, wavelength)
        if n_o <= n_out:
            return None
        return math.asin(n_out / n_o)

    def excess(theta: float) -> float:
        n = directional_index(crystal, wavelength, _meridional(theta), pol)
        return n * math.sin(theta) - n_out

    if excess(_HALF_PI) <= 0:
        return None
    return optimize.bisect(excess, 0.0, _HALF_PI, xtol=1e-14)


def _model_from_mapping(data: Mapping[str, Any], band: Tuple[float, float]) -> SellmeierModel:
    try:
        return SellmeierModel(
            float(data["a"]), float(data["b"]), float(data["c"]), float(data["d"]), band
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError("Invalid Sellmeier coefficients %r: %s" % (data, e)) from None


def material_from_mapping(data: Mapping[str, Any], length: float) -> UniaxialCrystal:
    """Build a crystal from a parsed material record."""
    try:
        band = tuple(float(v) for v in data.get("band_um", DEFAULT_BAND_UM))
        sign = UniaxialSign(data.get("sign", "negative"))
        ordinary = data["ordinary"]
        extraordinary = data["extraordinary"]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError("Invalid material record: %s" % e) from None
    if len(band) != 2:
        raise ConfigurationError("band_um must hold two values, got %r" % (band,))
    return UniaxialCrystal(
        _model_from_mapping(ordinary, band),  # type: ignore[arg-type]
        _model_from_mapping(extraordinary, band),  # type: ignore[arg-type]
        length,
        sign,
        str(data.get("name", "")),
    )


def builtin_materials() -> Dict[str, pathlib.Path]:
    """Material records shipped with the package, by upper-case name."""
    root = resources.files("supercone.materials")
    return {
        p.name.rsplit(".", 1)[0].upper(): pathlib.Path(str(p))
        for p in root.iterdir()
        if p.name.endswith(".yaml")
    }


def load_material(ref: Union[str, pathlib.Path], length: float) -> UniaxialCrystal:
    """Load a crystal by built-in name (e.g. "BBO") or from a YAML file."""
    builtin = builtin_materials()
    path = builtin.get(str(ref).upper(), pathlib.Path(ref))
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationError(
            "Unknown material %r (built-in: %s)" % (str(ref), ", ".join(sorted(builtin)))
        ) from None
    except yaml.YAMLError as e:
        raise ConfigurationError("Cannot parse material file %s: %s" % (path, e)) from None
    if not isinstance(data, dict):
        raise ConfigurationError("Material file %s does not hold a mapping" % path)
    LOGGER.debug("loaded material %s from %s", data.get("name", "?"), path)
    return material_from_mapping(data, length)
