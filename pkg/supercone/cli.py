# -*- coding: utf-8 -*-
"""Command line interface.

Subcommands::

    supercone solve-angle   phasematch angle, TIR angle and flat-face feasibility
    supercone simulate      signal, idler and flux densities with ring metrics
    supercone conditional   signal density for fixed idler directions
    supercone plan          refraction plan of the pump and the pair
    supercone rings         rings of previously written grid files
    supercone profile       line or radial profile of a grid file

Failures exit with the code carried by the exception (see ExitCode).

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import argparse
import logging
import math
import pathlib
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .amplitude import ProcessKind, Role
from .analysis import (
    RingMetrics,
    SliceAxis,
    conditional_widths,
    radial_profile,
    ring_metrics,
    rotational_symmetry_error,
    slice_profile,
)
from .common import LOGGER, get_debug_info, log_to_screen, sha256_file
from .config import PRESET_ALIASES, PRESETS, RunConfig, load_config, write_resolved
from .crystal import PolarizationClass, solve_phasematch_angle, tir_angle, walkoff_angle
from .engine import DensityGrid, Engine, PruneStats, flux_density
from .errors import (
    ExitCode,
    FormatError,
    PreconditionError,
    SuperconeError,
    TotalInternalReflection,
)
from .formats import grid as grid_format, pgm
from .formats.records import MetricRecord, write_metrics, write_yaml
from .planner import (
    AxiconConfiguration,
    DEFAULT_GLASS_INDEX,
    RefractionReport,
    crystal_exit,
    plan_axicon_coupling,
    signal_idler_exit_separation,
)

FORMATS = ("bin", "csv", "both")


def _deg(value: float) -> str:
    return "%.3f deg" % math.degrees(value)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Run configuration from --config, --preset and the override flags."""

    def scaled(value: Optional[float], scale: float) -> Optional[float]:
        return None if value is None else value * scale

    overrides: Dict[str, Any] = {
        "material": args.material,
        "crystal_length": scaled(args.length_um, 1e-6),
        "process": None if args.process is None else ProcessKind(args.process),
        "lambda_p": scaled(args.pump_nm, 1e-9),
        "lambda_s": scaled(args.signal_nm, 1e-9),
        "theta_p": scaled(args.theta_p_deg, math.pi / 180.0),
        "w_p": scaled(args.w_p_um, 1e-6),
        "m_phi": args.m_phi,
        "n": args.grid_n,
        "solve_theta": args.solve_theta,
    }
    return load_config(args.config, args.preset, overrides)


def engine_from_args(args: argparse.Namespace, cfg: RunConfig) -> Engine:
    return Engine(
        cfg.job(),
        work_budget=cfg.work_budget,
        budget_override=args.budget_override,
        checkpoint_dir=args.checkpoint_dir,
        workers=args.workers,
        progress=not args.no_progress,
    )


def write_density(
    args: argparse.Namespace, out_dir: pathlib.Path, name: str, grid: DensityGrid
) -> List[pathlib.Path]:
    """Write a grid in the requested formats and check what was written."""
    written = []
    if args.format in ("bin", "both"):
        path = out_dir / (name + grid_format.SUFFIX)
        grid_format.write_grid(path, grid)
        reloaded = grid_format.read_grid(path)
        if not np.array_equal(reloaded.values, grid.values):
            raise FormatError("%s does not read back identically" % path)
        written.append(path)
    if args.format in ("csv", "both"):
        path = out_dir / (name + ".csv")
        grid_format.write_csv(path, grid)
        written.append(path)
    if args.emit_pgm:
        path = out_dir / (name + ".pgm")
        pgm.write_pgm(path, grid.values, args.gamma)
        written.append(path)
    for path in written:
        LOGGER.info("wrote %s", path)
    return written


def write_sidecar(
    path: pathlib.Path,
    cfg: RunConfig,
    files: Sequence[pathlib.Path],
    runtime: float,
    prune: Dict[str, PruneStats],
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    data: Dict[str, Any] = {
        "software": dict(get_debug_info()),
        "parameters": cfg.resolved(),
        "runtime_s": float(runtime),
        "prune": {
            k: {"skipped": v.skipped, "total": v.total, "fraction": v.fraction}
            for k, v in prune.items()
        },
        "files": {p.name: sha256_file(p) for p in files},
    }
    data.update(extra or {})
    write_yaml(path, data)


def ring_records(prefix: str, rings: Sequence[RingMetrics]) -> List[MetricRecord]:
    records = [MetricRecord("%s_ring_count" % prefix, float(len(rings)), "")]
    for k, r in enumerate(rings):
        records += [
            MetricRecord("%s_ring_%d_radius" % (prefix, k), r.radius, "m"),
            MetricRecord("%s_ring_%d_fwhm" % (prefix, k), r.fwhm_thickness, "m"),
            MetricRecord("%s_ring_%d_peak" % (prefix, k), r.peak_density, "1/m^2"),
            MetricRecord(
                "%s_ring_%d_under_resolved" % (prefix, k), float(r.under_resolved), ""
            ),
        ]
    return records


def cmd_solve_angle(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    crystal = cfg.crystal()
    process = cfg.process_spec()
    theta = solve_phasematch_angle(crystal, cfg.lambda_p, process)
    tir = tir_angle(crystal, cfg.lambda_p, PolarizationClass.extraordinary)

    print("process:          %s, pump %.1f nm" % (process.kind.value, cfg.lambda_p * 1e9))
    print("phasematch angle: %s" % _deg(theta))
    print("pump TIR angle:   %s" % ("none" if tir is None else _deg(tir)))
    print("pump walk-off:    %s" % _deg(walkoff_angle(crystal, cfg.lambda_p, theta)))
    pump = crystal_exit(
        crystal, cfg.lambda_p, PolarizationClass.extraordinary, theta, "pump", face="flat face"
    )
    if pump.tir:
        print("WARNING: a flat face cannot couple the pump (total internal reflection)")
    else:
        print("flat-face pump:   %s in air" % _deg(pump.external_angle))  # type: ignore[arg-type]
    return ExitCode.ok


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = config_from_args(args).solved()
    engine = engine_from_args(args, cfg)
    job = engine.job
    estimate = job.work_estimate()
    print(
        "estimated work: %.3g amplitude evaluations per marginal (budget %.3g)"
        % (estimate, cfg.work_budget)
    )
    engine.check_budget(estimate)

    out_dir = pathlib.Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tic = time.perf_counter()
    prune: Dict[str, PruneStats] = {}
    sig = engine.marginal(Role.signal)
    prune["signal"] = engine.last_prune_stats
    idl = engine.marginal(Role.idler)
    prune["idler"] = engine.last_prune_stats
    flux = flux_density(sig, idl)
    runtime = time.perf_counter() - tic

    files: List[pathlib.Path] = []
    for name, grid in (("signal", sig), ("idler", idl), ("flux", flux)):
        files += write_density(args, out_dir, name, grid)

    records = [
        MetricRecord("runtime", runtime, "s"),
        MetricRecord("signal_symmetry_error", rotational_symmetry_error(sig), ""),
        MetricRecord("idler_symmetry_error", rotational_symmetry_error(idl), ""),
    ]
    for name, grid in (("signal", sig), ("idler", idl), ("flux", flux)):
        rings = ring_metrics(radial_profile(grid))
        records += ring_records(name, rings)
        radii = ", ".join("%.4g" % r.radius for r in rings)
        print("%s: %d ring(s) at %s m" % (name, len(rings), radii))
    for name, stats in prune.items():
        records.append(MetricRecord("%s_pruned_fraction" % name, stats.fraction, ""))

    metrics = out_dir / "metrics.yaml"
    write_metrics(metrics, records)
    resolved = out_dir / "resolved_config.yaml"
    write_resolved(resolved, cfg)
    write_sidecar(out_dir / "metadata.yaml", cfg, files + [metrics, resolved], runtime, prune)
    print("done in %.1f s, results in %s" % (runtime, out_dir))
    return ExitCode.ok


def _nearest_ring(rings: Sequence[RingMetrics], radius: float) -> RingMetrics:
    if not rings:
        raise PreconditionError("The signal marginal shows no ring")
    return min(rings, key=lambda r: abs(r.radius - radius))


def cmd_conditional(args: argparse.Namespace) -> int:
    cfg = config_from_args(args).solved()
    engine = engine_from_args(args, cfg)
    job = engine.job
    theta_i = math.radians(args.theta_i_deg)
    print(
        "estimated work: %.3g amplitude evaluations per conditional grid"
        % job.work_estimate(conditional=True)
    )

    if args.marginal is not None:
        marginal = grid_format.read_grid(args.marginal)
        job.grid.check_compatible(marginal.grid)
    else:
        LOGGER.info("no --marginal given, computing the signal marginal")
        marginal = engine.marginal(Role.signal)
    ring = _nearest_ring(
        ring_metrics(radial_profile(marginal)), job.grid.z_obs * math.tan(theta_i)
    )

    out_dir = pathlib.Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tic = time.perf_counter()
    files: List[pathlib.Path] = []
    widths: List[Dict[str, Any]] = []
    prune: Dict[str, PruneStats] = {}
    for k, phi_deg in enumerate(args.phi_i_deg):
        name = "conditional_%d" % k
        grid = engine.conditional(theta_i, math.radians(phi_deg))
        prune[name] = engine.last_prune_stats
        files += write_density(args, out_dir, name, grid)
        record: Dict[str, Any] = {
            "grid": name,
            "theta_i_deg": args.theta_i_deg,
            "phi_i_deg": phi_deg,
        }
        try:
            w = conditional_widths(grid, ring)
        except PreconditionError as e:
            LOGGER.warning("%s: %s", name, e)
            record["reliable"] = False
        else:
            record.update(
                {
                    "fwhm_azimuthal_m": w.fwhm_azimuthal,
                    "fwhm_radial_m": w.fwhm_radial,
                    "frac_of_circumference": w.frac_of_circumference,
                    "frac_of_ring_thickness": w.frac_of_ring_thickness,
                    "peak_m": [float(w.peak[0]), float(w.peak[1])],
                    "reliable": w.reliable,
                }
            )
            print(
                "phi_i = %.2f deg: %.3g of the circumference, %.3g of the ring thickness%s"
                % (
                    phi_deg,
                    w.frac_of_circumference,
                    w.frac_of_ring_thickness,
                    "" if w.reliable else " (unreliable)",
                )
            )
        widths.append(record)
    runtime = time.perf_counter() - tic

    widths_path = out_dir / "conditional_widths.yaml"
    write_yaml(
        widths_path,
        {
            "ring": {"radius_m": ring.radius, "fwhm_m": ring.fwhm_thickness},
            "spots": widths,
        },
    )
    resolved = out_dir / "resolved_config.yaml"
    write_resolved(resolved, cfg)
    write_sidecar(
        out_dir / "metadata.yaml",
        cfg,
        files + [widths_path, resolved],
        runtime,
        prune,
        {"theta_i_deg": args.theta_i_deg, "phi_i_deg": list(args.phi_i_deg)},
    )
    return ExitCode.ok


def print_plan(reports: Sequence[RefractionReport]) -> None:
    columns = ("", "ray", "face", "inside", "incid.", "refr.", "outside")
    print("%-3s %-7s %-24s %10s %10s %10s %10s" % columns)
    for r in reports:
        if r.tir:
            refr = outside = "TIR"
        else:
            refr = "%.3f" % math.degrees(r.external_incidence)  # type: ignore[arg-type]
            outside = "%.3f" % math.degrees(r.external_angle)  # type: ignore[arg-type]
        print(
            "%-3s %-7s %-24s %10.3f %10.3f %10s %10s"
            % (
                "!!" if r.tir else "",
                r.ray,
                r.face,
                math.degrees(r.internal_angle),
                math.degrees(r.incidence),
                refr,
                outside,
            )
        )


def cmd_plan(args: argparse.Namespace) -> int:
    cfg = config_from_args(args).solved()
    crystal = cfg.crystal()
    process = cfg.process_spec()
    theta = cfg.theta_p
    assert theta is not None

    if args.axicon == "flat":
        reports = [
            crystal_exit(crystal, wavelength, pol, theta, ray, face="flat face")
            for ray, wavelength, pol in (
                ("pump", cfg.lambda_p, PolarizationClass.extraordinary),
                ("signal", process.lambda_s, process.signal_pol),
                ("idler", process.lambda_i, process.idler_pol),
            )
        ]
    else:
        reports = plan_axicon_coupling(
            AxiconConfiguration(args.axicon),
            crystal,
            cfg.lambda_p,
            theta,
            n_glass=args.n_glass,
            index_matched=not args.not_index_matched,
            kind=process.kind,
        )
    print("internal pump angle %s, %s" % (_deg(theta), process.kind.value))
    print_plan(reports)

    separation: Optional[float] = None
    if process.is_degenerate:
        try:
            separation = signal_idler_exit_separation(
                crystal, process.lambda_s, theta, process.kind
            )
        except TotalInternalReflection as e:
            print("flat-face signal/idler separation: %s" % e)
        else:
            print("flat-face signal/idler separation: %s" % _deg(separation))

    if args.output_dir is not None:
        out_dir = pathlib.Path(args.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_yaml(
            out_dir / "plan.yaml",
            {
                "configuration": args.axicon,
                "theta_p_deg": math.degrees(theta),
                "rows": [r.as_record() for r in reports],
                "flat_face_separation_deg": (
                    None if separation is None else math.degrees(separation)
                ),
            },
        )
    return ExitCode.ok


def _profile(grid: DensityGrid, axis: str):
    if axis == "radial":
        return radial_profile(grid)
    return slice_profile(grid, SliceAxis.y_equals_0 if axis == "x" else SliceAxis.x_equals_0)


def cmd_rings(args: argparse.Namespace) -> int:
    for path in args.grids:
        rings = ring_metrics(_profile(grid_format.read_grid(path), args.axis), args.prominence)
        print("%s: %d ring(s)" % (path, len(rings)))
        for r in rings:
            print(
                "  radius %.4g m  FWHM %.4g m  peak %.4g%s"
                % (
                    r.radius,
                    r.fwhm_thickness,
                    r.peak_density,
                    "  under-resolved" if r.under_resolved else "",
                )
            )
    return ExitCode.ok


def cmd_profile(args: argparse.Namespace) -> int:
    profile = _profile(grid_format.read_grid(args.grid), args.axis)
    table = np.column_stack([profile.coordinates, profile.values])
    if args.output is None:
        np.savetxt(sys.stdout, table, fmt="%.10g")
    else:
        np.savetxt(args.output, table, fmt="%.17g", delimiter=",", header="position_m,density")
    return ExitCode.ok


def _run_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="YAML run file")
    g.add_argument("--preset", choices=(*PRESETS, *PRESET_ALIASES))
    g.add_argument("--material", help="built-in material name or YAML file")
    g.add_argument("--length-um", type=float, help="crystal length")
    g.add_argument("--process", choices=[k.value for k in ProcessKind])
    g.add_argument("--pump-nm", type=float)
    g.add_argument("--signal-nm", type=float, help="non-degenerate signal wavelength")
    g.add_argument("--w-p-um", type=float, help="pump waist")
    g.add_argument("--grid-n", type=int)
    g.add_argument("--m-phi", type=int)
    theta = g.add_mutually_exclusive_group()
    theta.add_argument("--theta-p-deg", type=float)
    theta.add_argument("--solve-theta", action="store_true")


def _engine_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("engine and outputs")
    g.add_argument("--budget-override", action="store_true")
    g.add_argument("--checkpoint-dir")
    g.add_argument("--workers", type=int)
    g.add_argument("--no-progress", action="store_true")
    g.add_argument("--output-dir", default=".")
    g.add_argument("--format", choices=FORMATS, default="bin")
    g.add_argument("--emit-pgm", action="store_true")
    g.add_argument("--gamma", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supercone", description="Super-critically phasematched SPDC simulator"
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-angle", help="phasematch and TIR angles")
    _run_options(p)
    p.set_defaults(func=cmd_solve_angle)

    p = sub.add_parser("simulate", help="marginal and flux densities")
    _run_options(p)
    _engine_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("conditional", help="signal density for fixed idler directions")
    _run_options(p)
    _engine_options(p)
    p.add_argument("--theta-i-deg", type=float, required=True)
    p.add_argument("--phi-i-deg", type=float, nargs="+", default=[45.0])
    p.add_argument("--marginal", help="signal marginal grid file giving the ring")
    p.set_defaults(func=cmd_conditional)

    p = sub.add_parser("plan", help="refraction plan")
    _run_options(p)
    p.add_argument(
        "--axicon",
        choices=["flat"] + [c.value for c in AxiconConfiguration],
        default="flat",
    )
    p.add_argument(
        "--n-glass",
        type=float,
        default=DEFAULT_GLASS_INDEX,
        help="axicon glass index (default %(default)s); 1.545, n_e of BBO at 775 nm,"
        " gives the 25.7 deg pump angle of affixed axicons",
    )
    p.add_argument("--not-index-matched", action="store_true")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("rings", help="rings of grid files")
    p.add_argument("grids", nargs="+")
    p.add_argument("--axis", choices=("radial", "x", "y"), default="radial")
    p.add_argument("--prominence", type=float, default=0.05)
    p.set_defaults(func=cmd_rings)

    p = sub.add_parser("profile", help="profile of a grid file")
    p.add_argument("grid")
    p.add_argument("--axis", choices=("radial", "x", "y"), default="radial")
    p.add_argument("-o", "--output", help="CSV file, standard output by default")
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    log_to_screen((logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)])
    try:
        return int(args.func(args))
    except SuperconeError as e:
        print("error: %s" % e, file=sys.stderr)
        return int(e.exit_code)


if __name__ == "__main__":
    sys.exit(main())
