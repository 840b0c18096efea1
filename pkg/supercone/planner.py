# -*- coding: utf-8 -*-
"""Refraction of pump, signal and idler rays at the faces of the setup.

Rays are traced in the meridional plane holding the optic axis z and the
face normal. Angles are signed, measured from z; a face normal tilted by
``face_normal_tilt`` from z models one face of a 90 degree apex axicon
(tilt of 45 degrees). Extraordinary rays refract with the phase index of
their internal direction.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import math
from typing import Any, Dict, List, Optional

import numpy as np
from typing_extensions import Self

from .amplitude import POLARIZATIONS, ProcessKind
from .common import LOGGER
from .crystal import PolarizationClass, UniaxialCrystal, directional_index
from .errors import PreconditionError, TotalInternalReflection

#: Face tilt of a 90 degree apex axicon.
AXICON_FACE_TILT = math.pi / 4

#: Index of the glass axicons when none is given.
DEFAULT_GLASS_INDEX = 1.52


class AxiconConfiguration(enum.Enum):
    #: Both crystal faces cut as 90 degree axicons.
    crystal_cut_axicon = "crystal-cut"

    #: Flat crystal between two glass axicons affixed to its faces.
    affixed_glass_axicons = "affixed-glass"


@dataclasses.dataclass(frozen=True)
class PlanarInterface:
    """A face between two media, seen from the inside medium."""

    n_in: float
    n_out: float

    #: Angle between the face normal and z, in radians.
    face_normal_tilt: float = 0.0

    label: str = "face"

    def __post_init__(self) -> None:
        if not (self.n_in >= 1 and self.n_out >= 1):
            raise PreconditionError(
                "Indices must be at least 1, got %r and %r" % (self.n_in, self.n_out)
            )

    def reversed(self) -> Self:
        """The same face crossed from the outside medium."""
        return dataclasses.replace(self, n_in=self.n_out, n_out=self.n_in)


@dataclasses.dataclass(frozen=True)
class RefractionReport:
    """One ray crossing one face."""

    ray: str
    face: str

    #: Angle of the ray to z before the face.
    internal_angle: float

    #: Angle to the face normal before the face.
    incidence: float

    #: Angle to the face normal after the face, None on TIR.
    external_incidence: Optional[float]

    #: Angle to z after the face, None on TIR.
    external_angle: Optional[float]

    tir: bool = False

    def __post_init__(self) -> None:
        if self.tir and self.external_angle is not None:
            raise PreconditionError("A totally reflected ray has no external angle")

    def as_record(self) -> Dict[str, Any]:
        """Row of a plan table, angles in degrees."""

        def deg(v: Optional[float]) -> Optional[float]:
            return None if v is None else math.degrees(v)

        return {
            "ray": self.ray,
            "face": self.face,
            "internal_deg": deg(self.internal_angle),
            "incidence_deg": deg(self.incidence),
            "external_incidence_deg": deg(self.external_incidence),
            "external_deg": deg(self.external_angle),
            "tir": self.tir,
        }


def refract_at_face(
    theta_internal_to_z: float, iface: PlanarInterface, ray: str = "ray"
) -> RefractionReport:
    """Snell's law at a face; total internal reflection is flagged, not raised."""
    delta = theta_internal_to_z - iface.face_normal_tilt
    s = iface.n_in * math.sin(delta) / iface.n_out
    if abs(s) > 1.0:
        return RefractionReport(
            ray, iface.label, theta_internal_to_z, abs(delta), None, None, tir=True
        )
    refracted = math.asin(s)
    return RefractionReport(
        ray,
        iface.label,
        theta_internal_to_z,
        abs(delta),
        abs(refracted),
        iface.face_normal_tilt + refracted,
    )


def ray_index(
    crystal: UniaxialCrystal, wavelength: float, pol: PolarizationClass, theta: float
) -> float:
    """Phase index of a ray travelling at θ to the optic axis."""
    s = np.array([math.sin(theta), 0.0, math.cos(theta)])
    return float(directional_index(crystal, wavelength, s, pol))


def crystal_exit(
    crystal: UniaxialCrystal,
    wavelength: float,
    pol: PolarizationClass,
    theta: float,
    ray: str,
    face_tilt: float = 0.0,
    n_out: float = 1.0,
    face: str = "exit face",
) -> RefractionReport:
    """Refraction of a crystal ray out through a face."""
    iface = PlanarInterface(
        ray_index(crystal, wavelength, pol, theta), n_out, face_tilt, face
    )
    return refract_at_face(theta, iface, ray)


def signal_idler_exit_separation(
    crystal: UniaxialCrystal,
    lambda_pair: float,
    theta_internal: float,
    kind: ProcessKind = ProcessKind.type_ii,
    face_tilt: float = 0.0,
) -> float:
    """Angle between signal and idler after leaving the crystal.

    Both photons of the degenerate pair travel at ``theta_internal``; each
    refracts with its own index.

    Raises
    ------
    TotalInternalReflection
        When either ray cannot leave the face; both reports are attached.

    """
    signal_pol, idler_pol = POLARIZATIONS[kind]
    reports = [
        crystal_exit(crystal, lambda_pair, signal_pol, theta_internal, "signal", face_tilt),
        crystal_exit(crystal, lambda_pair, idler_pol, theta_internal, "idler", face_tilt),
    ]
    if any(r.tir for r in reports):
        raise TotalInternalReflection(reports)
    sig, idl = reports
    return abs(sig.external_angle - idl.external_angle)  # type: ignore[operator]


def _through_glass(
    crystal: UniaxialCrystal,
    wavelength: float,
    pol: PolarizationClass,
    theta: float,
    ray: str,
    side: str,
    n_glass: float,
    index_matched: bool,
) -> List[RefractionReport]:
    """Crystal to glass through the flat face, then glass to air."""
    n_in = n_glass if index_matched else ray_index(crystal, wavelength, pol, theta)
    inner = refract_at_face(
        theta, PlanarInterface(n_in, n_glass, 0.0, "%s crystal/glass" % side), ray
    )
    if inner.tir:
        return [inner]
    outer = refract_at_face(
        inner.external_angle,  # type: ignore[arg-type]
        PlanarInterface(n_glass, 1.0, AXICON_FACE_TILT, "%s glass axicon" % side),
        ray,
    )
    return [inner, outer]


def plan_axicon_coupling(
    config: AxiconConfiguration,
    crystal: UniaxialCrystal,
    lambda_p: float,
    theta_p_internal: float,
    n_glass: float = DEFAULT_GLASS_INDEX,
    index_matched: bool = True,
    kind: ProcessKind = ProcessKind.type_ii,
) -> List[RefractionReport]:
    """Every face crossing of the pump and of the degenerate pair.

    Entry rows are traced backward from the internal angle, so the angles
    after the face are the free-space angles the pump has to be brought in
    with. Faces with total internal reflection are flagged and end their ray.

    """
    lambda_pair = 2.0 * lambda_p
    signal_pol, idler_pol = POLARIZATIONS[kind]
    rays = [
        ("pump", lambda_p, PolarizationClass.extraordinary, "input"),
        ("pump", lambda_p, PolarizationClass.extraordinary, "output"),
        ("signal", lambda_pair, signal_pol, "output"),
        ("idler", lambda_pair, idler_pol, "output"),
    ]
    reports: List[RefractionReport] = []
    for ray, wavelength, pol, side in rays:
        if config is AxiconConfiguration.crystal_cut_axicon:
            reports.append(
                crystal_exit(
                    crystal,
                    wavelength,
                    pol,
                    theta_p_internal,
                    ray,
                    AXICON_FACE_TILT,
                    face="%s axicon face" % side,
                )
            )
        else:
            reports.extend(
                _through_glass(
                    crystal,
                    wavelength,
                    pol,
                    theta_p_internal,
                    ray,
                    side,
                    n_glass,
                    index_matched,
                )
            )
    for r in reports:
        if r.tir:
            LOGGER.warning("%s is totally internally reflected at the %s", r.ray, r.face)
    return reports
