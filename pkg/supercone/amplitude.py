# -*- coding: utf-8 -*-
"""Pair-generation amplitudes and polarization assignment.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import math
from typing import NamedTuple, Optional

import numpy as np
from typing_extensions import Self

from .crystal import (
    PolarizationClass,
    UniaxialCrystal,
    directional_index,
    energy_match,
)
from .errors import ConfigurationError, FrameMismatch, PreconditionError
from .kinematics import (
    Frame,
    MismatchVector,
    PumpSpec,
    directions,
    mismatch_crystal,
    pump_central_k,
    to_pump_frame,
)


class ProcessKind(enum.Enum):
    type_i = "type-i"
    type_ii = "type-ii"


class Role(enum.Enum):
    signal = "signal"
    idler = "idler"


#: Polarization classes of (signal, idler) for each kind of process.
POLARIZATIONS = {
    ProcessKind.type_i: (PolarizationClass.ordinary, PolarizationClass.ordinary),
    ProcessKind.type_ii: (PolarizationClass.extraordinary, PolarizationClass.ordinary),
}


@dataclasses.dataclass(frozen=True)
class ProcessSpec:
    """Phasematching type and the three vacuum wavelengths, in meters."""

    kind: ProcessKind
    lambda_p: float
    lambda_s: float
    lambda_i: float
    signal_pol: PolarizationClass
    idler_pol: PolarizationClass
    pump_pol: PolarizationClass = PolarizationClass.extraordinary

    def __post_init__(self) -> None:
        lhs = 1.0 / self.lambda_p
        rhs = 1.0 / self.lambda_s + 1.0 / self.lambda_i
        if abs(lhs - rhs) > 1e-12 * lhs:
            raise ConfigurationError(
                "Wavelengths %.6g, %.6g and %.6g m do not conserve energy"
                % (self.lambda_p, self.lambda_s, self.lambda_i)
            )
        if (self.signal_pol, self.idler_pol) != POLARIZATIONS[self.kind]:
            raise ConfigurationError(
                "%s requires signal/idler polarizations %s/%s"
                % ((self.kind.value,) + tuple(p.name for p in POLARIZATIONS[self.kind]))
            )
        if self.pump_pol is not PolarizationClass.extraordinary:
            raise ConfigurationError("The pump must be extraordinarily polarized")

    @classmethod
    def create(
        cls, kind: ProcessKind, lambda_p: float, lambda_s: Optional[float] = None
    ) -> Self:
        """Process with the idler set by energy conservation.

        Without ``lambda_s`` the process is degenerate, λ_s = λ_i = 2λ_p.

        """
        if lambda_s is None:
            lambda_s = lambda_i = 2.0 * lambda_p
        else:
            try:
                lambda_i = energy_match(lambda_p, lambda_s)
            except PreconditionError as e:
                raise ConfigurationError(str(e)) from None
        signal_pol, idler_pol = POLARIZATIONS[kind]
        return cls(kind, lambda_p, lambda_s, lambda_i, signal_pol, idler_pol)

    @property
    def is_degenerate(self) -> bool:
        return abs(self.lambda_s - self.lambda_i) <= 1e-12 * self.lambda_s

    def wavelength(self, role: Role) -> float:
        return self.lambda_s if role is Role.signal else self.lambda_i

    def polarization(self, role: Role) -> PolarizationClass:
        return self.signal_pol if role is Role.signal else self.idler_pol


@dataclasses.dataclass(frozen=True)
class PairAmplitude:
    """Relative pair-generation amplitude."""

    value: complex

    def __abs__(self) -> float:
        return abs(self.value)

    @property
    def probability(self) -> float:
        return self.value.real**2 + self.value.imag**2


class PolarizationState(NamedTuple):
    #: Transverse unit vector (x, y) of the field.
    vector: np.ndarray
    pol: PolarizationClass


def optic_path_length(l_crystal: float, theta_p: float) -> float:
    """Path length of a pump constituent crossing the crystal at θ_p."""
    if not 0.0 <= theta_p < 0.5 * math.pi:
        raise PreconditionError("theta_p must lie in [0, pi/2), got %r" % theta_p)
    return l_crystal / math.cos(theta_p)


def sinc(u: float) -> float:
    """Unnormalized sinc, sin(u)/u."""
    return 1.0 if u == 0.0 else math.sin(u) / u


def gaussian_pair_amplitude(
    dk_local: MismatchVector, w_p: float, l_optic: float
) -> PairAmplitude:
    """Amplitude of one Gaussian pump constituent for a pump-frame mismatch.

    exp(-w_p²(Δk_x'² + Δk_y'²)/4) · sinc(L Δk_z'/2) · exp(i L Δk_z'/2)

    """
    if dk_local.frame is not Frame.pump_local:
        raise FrameMismatch(Frame.pump_local, dk_local.frame)
    dx, dy, dz = (float(v) for v in dk_local.dk)
    g = math.exp(-0.25 * w_p * w_p * (dx * dx + dy * dy))
    u = 0.5 * l_optic * dz
    return PairAmplitude(g * sinc(u) * complex(math.cos(u), math.sin(u)))


def bessel_gauss_pair_amplitude(
    k_s: np.ndarray, k_i: np.ndarray, pump: PumpSpec, crystal: UniaxialCrystal
) -> PairAmplitude:
    """Amplitude of the full pump cone, averaged over its m_phi constituents."""
    index = directional_index(
        crystal,
        pump.lambda_p,
        directions(np.asarray(pump.theta_p), np.asarray(0.0)),
        PolarizationClass.extraordinary,
    )
    l_optic = optic_path_length(crystal.length, pump.theta_p)
    total = 0j
    for phi_p in pump.phi_samples():
        k_p = pump_central_k(pump, phi_p, index)
        local = to_pump_frame(mismatch_crystal(k_s, k_i, k_p), pump.theta_p, phi_p)
        total += gaussian_pair_amplitude(local, pump.w_p, l_optic).value
    return PairAmplitude(total / pump.m_phi)


def polarization_vector(role: Role, process: ProcessSpec, phi: float) -> PolarizationState:
    """Field direction of a photon emitted at azimuth φ.

    Extraordinary photons are polarized radially and ordinary ones azimuthally.

    """
    pol = process.polarization(role)
    if pol is PolarizationClass.extraordinary:
        vector = np.array([math.cos(phi), math.sin(phi)])
    else:
        vector = np.array([-math.sin(phi), math.cos(phi)])
    return PolarizationState(vector, pol)
