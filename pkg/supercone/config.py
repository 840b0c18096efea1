# -*- coding: utf-8 -*-
"""Run configuration.

Run files are YAML mappings. Dimensioned keys carry their unit as a suffix
and are converted to SI units and radians when loaded::

    preset: desk
    material: BBO
    crystal_length_um: 500
    process: type-ii
    pump_nm: 405
    theta_p: solve
    w_p_um: 84

Values are resolved in order: preset, file, command line. The resolved
configuration is written back with SI keys only (``*_m``, ``*_rad``) and an
explicit θ_p, so that it reproduces a run exactly.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import math
import pathlib
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from typing_extensions import Self

from .amplitude import ProcessKind, ProcessSpec
from .common import LOGGER
from .crystal import UniaxialCrystal, load_material, solve_phasematch_angle
from .engine import (
    DEFAULT_CHECKPOINT_EVERY,
    DEFAULT_PRUNE_THRESHOLD,
    DEFAULT_WORK_BUDGET,
    SimulationJob,
)
from .errors import ConfigurationError, SuperconeError
from .formats.records import read_yaml, write_yaml
from .kinematics import GridSpec, PumpSpec

#: Scale of the unit suffixes accepted in run files.
UNITS = {
    "nm": 1e-9,
    "um": 1e-6,
    "mm": 1e-3,
    "m": 1.0,
    "deg": math.pi / 180.0,
    "rad": 1.0,
}

#: Dimensioned quantities: file name -> (field, SI suffix).
QUANTITIES = {
    "crystal_length": ("crystal_length", "m"),
    "pump": ("lambda_p", "m"),
    "signal": ("lambda_s", "m"),
    "theta_p": ("theta_p", "rad"),
    "w_p": ("w_p", "m"),
    "half_extent": ("half_extent", "m"),
    "z_obs": ("z_obs", "m"),
}

#: Dimensionless keys: file name -> field.
PLAIN = {
    "material": "material",
    "process": "process",
    "m_phi": "m_phi",
    "grid_n": "n",
    "prune_threshold": "prune_threshold",
    "checkpoint_every": "checkpoint_every",
    "jacobian": "jacobian",
    "work_budget": "work_budget",
}

PRESETS: Dict[str, Dict[str, Any]] = {
    "desk": {"n": 160, "m_phi": 180, "half_extent": 0.25, "z_obs": 0.2},
    "paper": {"n": 750, "m_phi": 750, "half_extent": 0.25, "z_obs": 0.2},
}

#: Other names accepted for a preset.
PRESET_ALIASES = {"full": "paper"}

#: Value of theta_p asking for the collinear phasematch angle.
SOLVE = "solve"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of a run, SI units and radians."""

    material: str = "BBO"
    crystal_length: float = 500e-6
    process: ProcessKind = ProcessKind.type_ii
    lambda_p: float = 405e-9

    #: None for the degenerate process.
    lambda_s: Optional[float] = None

    #: None asks for the collinear phasematch angle.
    theta_p: Optional[float] = None

    w_p: float = 84e-6
    m_phi: int = 180
    n: int = 160
    half_extent: float = 0.25
    z_obs: float = 0.2
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY
    jacobian: bool = False
    work_budget: float = DEFAULT_WORK_BUDGET

    def crystal(self) -> UniaxialCrystal:
        return load_material(self.material, self.crystal_length)

    def process_spec(self) -> ProcessSpec:
        return ProcessSpec.create(self.process, self.lambda_p, self.lambda_s)

    def solved(self) -> Self:
        """This configuration with an explicit θ_p."""
        if self.theta_p is not None:
            return self
        process = self.process_spec()
        if not process.is_degenerate:
            raise ConfigurationError(
                "theta_p = solve requires a degenerate process; give theta_p_deg"
            )
        theta = solve_phasematch_angle(self.crystal(), self.lambda_p, process)
        LOGGER.info("solved theta_p = %.6f deg", math.degrees(theta))
        return dataclasses.replace(self, theta_p=theta)

    def job(self) -> SimulationJob:
        cfg = self.solved()
        try:
            return SimulationJob(
                cfg.crystal(),
                cfg.process_spec(),
                PumpSpec(cfg.lambda_p, cfg.theta_p, cfg.w_p, cfg.m_phi),  # type: ignore[arg-type]
                GridSpec(cfg.n, cfg.half_extent, cfg.z_obs),
                cfg.prune_threshold,
                cfg.checkpoint_every,
                cfg.jacobian,
            )
        except ConfigurationError:
            raise
        except SuperconeError as e:
            raise ConfigurationError(str(e)) from None

    def resolved(self) -> Dict[str, Any]:
        """Mapping of a resolved run file, SI keys and explicit θ_p."""
        cfg = self.solved()
        return {
            "material": cfg.material,
            "crystal_length_m": float(cfg.crystal_length),
            "process": cfg.process.value,
            "pump_m": float(cfg.lambda_p),
            "signal_m": None if cfg.lambda_s is None else float(cfg.lambda_s),
            "theta_p_rad": float(cfg.theta_p),  # type: ignore[arg-type]
            "w_p_m": float(cfg.w_p),
            "m_phi": int(cfg.m_phi),
            "grid_n": int(cfg.n),
            "half_extent_m": float(cfg.half_extent),
            "z_obs_m": float(cfg.z_obs),
            "prune_threshold": float(cfg.prune_threshold),
            "checkpoint_every": int(cfg.checkpoint_every),
            "jacobian": bool(cfg.jacobian),
            "work_budget": float(cfg.work_budget),
        }


def split_unit(key: str) -> Tuple[str, Optional[str]]:
    """('pump', 'nm') for 'pump_nm'; (key, None) without a unit suffix."""
    base, _, suffix = key.rpartition("_")
    if base and suffix in UNITS:
        return base, suffix
    return key, None


def _convert(field: str, value: Any) -> Any:
    if field == "process":
        try:
            return ProcessKind(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                "Unknown process %r, expected one of %s"
                % (value, ", ".join(k.value for k in ProcessKind))
            ) from None
    if field == "material":
        return str(value)
    if field == "jacobian":
        if not isinstance(value, bool):
            raise ConfigurationError("jacobian must be true or false, got %r" % value)
        return value
    if field in ("m_phi", "n", "checkpoint_every"):
        if isinstance(value, bool) or int(value) != value:
            raise ConfigurationError("%s must be an integer, got %r" % (field, value))
        return int(value)
    return float(value)


def parse_mapping(data: Mapping[str, Any]) -> Dict[str, Any]:
    """RunConfig fields (SI units) of a run file mapping.

    The ``preset`` key is returned unchanged.

    """
    fields: Dict[str, Any] = {}
    for key, value in data.items():
        key = str(key)
        if key == "preset":
            fields["preset"] = value
            continue
        if key == "theta_p":
            if value != SOLVE:
                raise ConfigurationError(
                    "theta_p takes a unit suffix (theta_p_deg) or the value %r" % SOLVE
                )
            fields["theta_p"] = None
            continue
        base, unit = split_unit(key)
        try:
            if unit is not None and base in QUANTITIES:
                if value is None:
                    fields[QUANTITIES[base][0]] = None
                else:
                    fields[QUANTITIES[base][0]] = float(value) * UNITS[unit]
            elif key in PLAIN:
                fields[PLAIN[key]] = _convert(PLAIN[key], value)
            else:
                raise ConfigurationError("Unknown configuration key %r" % key)
        except (TypeError, ValueError) as e:
            raise ConfigurationError("Invalid value %r for %s: %s" % (value, key, e)) from None
    return fields


def build_config(
    data: Optional[Mapping[str, Any]] = None,
    preset: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Resolve a preset, a run file mapping and field overrides."""
    fields = parse_mapping(data or {})
    preset = preset or fields.pop("preset", None)
    fields.pop("preset", None)
    resolved: Dict[str, Any] = {}
    if preset is not None:
        preset = PRESET_ALIASES.get(preset, preset)
        if preset not in PRESETS:
            raise ConfigurationError(
                "Unknown preset %r, expected one of %s" % (preset, ", ".join(PRESETS))
            )
        resolved.update(PRESETS[preset])
    resolved.update(fields)
    resolved.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if (overrides or {}).get("solve_theta"):
        resolved["theta_p"] = None
    resolved.pop("solve_theta", None)
    try:
        return RunConfig(**resolved)
    except TypeError as e:
        raise ConfigurationError(str(e)) from None


def load_config(
    path: Optional[Union[str, pathlib.Path]] = None,
    preset: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Run configuration from an optional YAML file."""
    data: Mapping[str, Any] = {}
    if path is not None:
        try:
            data = read_yaml(path) or {}
        except FileNotFoundError:
            raise ConfigurationError("Configuration file %s not found" % path) from None
        except SuperconeError as e:
            raise ConfigurationError(str(e)) from None
        if not isinstance(data, dict):
            raise ConfigurationError("Configuration file %s does not hold a mapping" % path)
        LOGGER.debug("loaded configuration %s", path)
    return build_config(data, preset, overrides)


def write_resolved(path: Union[str, pathlib.Path], config: RunConfig) -> None:
    write_yaml(path, config.resolved())
