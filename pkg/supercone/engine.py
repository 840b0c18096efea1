# -*- coding: utf-8 -*-
"""Marginal and conditional output densities over observation grids.

The work is split in chunks of grid rows. After each chunk the rows computed
so far can be saved to a checkpoint, from which an interrupted run resumes
bit-identically.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import enum
import hashlib
import json
import math
import pathlib
import time
from typing import Any, Callable, Dict, Mapping, NamedTuple, Optional, Tuple, Union

import numba
import numpy as np
from tqdm import tqdm

from . import kernels
from .amplitude import ProcessSpec, Role, optic_path_length
from .common import LOGGER
from .crystal import SellmeierModel, UniaxialCrystal, wave_vector
from .errors import (
    BudgetExceeded,
    CheckpointMismatch,
    ConfigurationError,
    FrameMismatch,
    PhysicsInfeasible,
    PreconditionError,
    RunInterrupted,
)
from .formats import checkpoint
from .kinematics import (
    DirectionAngles,
    Frame,
    GridSpec,
    MismatchVector,
    PumpSpec,
    direction_from_angles,
    grid_wave_vectors,
    pump_tables,
    wrap_azimuth,
)

#: Gaussian exponent below which a pump constituent is skipped.
DEFAULT_PRUNE_THRESHOLD = -30.0

#: Rows computed between two checkpoints.
DEFAULT_CHECKPOINT_EVERY = 8

#: Largest number of amplitude evaluations a run may do without override.
DEFAULT_WORK_BUDGET = 2e11

#: Relative tolerance of the unit-sum normalization.
NORMALIZATION_TOLERANCE = 1e-9


class Normalization(enum.IntEnum):
    """How the values of a density grid are scaled. Values are stored on disk."""

    raw = 0
    unit_sum = 1


@dataclasses.dataclass(frozen=True, eq=False)
class DensityGrid:
    """Nonnegative density sampled on a GridSpec, indexed [iy, ix]."""

    values: np.ndarray
    grid: GridSpec
    normalization: Normalization
    metadata: Mapping[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        n = self.grid.n
        if values.shape != (n, n):
            raise PreconditionError(
                "Expected %d x %d values, got shape %r" % (n, n, values.shape)
            )
        if not np.all(values >= 0):
            raise PreconditionError("Densities must be finite and nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.normalization is Normalization.unit_sum:
            total = self.integral()
            if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
                raise PreconditionError(
                    "Unit-sum grid integrates to %.12g instead of 1" % total
                )

    @property
    def cell_area(self) -> float:
        return self.grid.cell_area

    def integral(self) -> float:
        """Σ values · cell_area."""
        return math.fsum(self.values.ravel()) * self.cell_area


@dataclasses.dataclass(frozen=True)
class SimulationJob:
    """Everything that determines the content of an output grid."""

    crystal: UniaxialCrystal
    process: ProcessSpec
    pump: PumpSpec
    grid: GridSpec
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY

    #: Weight the partner sum by the transverse k-space area of each cell
    #: instead of its (x, y) area.
    jacobian: bool = False

    def __post_init__(self) -> None:
        if not self.prune_threshold <= 0:
            raise ConfigurationError(
                "prune_threshold is an exponent bound and must be <= 0, got %r"
                % self.prune_threshold
            )
        if self.checkpoint_every < 1:
            raise ConfigurationError("checkpoint_every must be at least 1")
        if abs(self.pump.lambda_p - self.process.lambda_p) > 1e-12 * self.process.lambda_p:
            raise ConfigurationError("Pump and process wavelengths differ")

    def work_estimate(self, conditional: bool = False) -> float:
        """Amplitude evaluations of one marginal, or of one conditional grid."""
        cells = float(self.grid.n) ** 2
        inner = 1.0 if conditional else cells
        return cells * inner * self.pump.m_phi

    def fingerprint(self, role: str, **extra: float) -> bytes:
        """SHA-256 of every parameter that affects the output of ``role``."""

        def model(m: SellmeierModel) -> Dict[str, Any]:
            return {
                "a": float(m.a).hex(),
                "b": float(m.b).hex(),
                "c": float(m.c).hex(),
                "d": float(m.d).hex(),
                "band": [float(v).hex() for v in m.band_um],
            }

        p = self.process
        record = {
            "crystal": {
                "ordinary": model(self.crystal.ordinary),
                "extraordinary": model(self.crystal.extraordinary),
                "length": float(self.crystal.length).hex(),
                "sign": self.crystal.sign.value,
            },
            "process": {
                "kind": p.kind.value,
                "wavelengths": [float(v).hex() for v in (p.lambda_p, p.lambda_s, p.lambda_i)],
                "polarizations": [v.value for v in (p.pump_pol, p.signal_pol, p.idler_pol)],
            },
            "pump": {
                "theta_p": float(self.pump.theta_p).hex(),
                "w_p": float(self.pump.w_p).hex(),
                "m_phi": self.pump.m_phi,
            },
            "grid": {
                "n": self.grid.n,
                "half_extent": float(self.grid.half_extent).hex(),
                "z_obs": float(self.grid.z_obs).hex(),
            },
            "prune_threshold": float(self.prune_threshold).hex(),
            "jacobian": self.jacobian,
            "role": role,
            "extra": {k: float(v).hex() for k, v in sorted(extra.items())},
        }
        text = json.dumps(record, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("ascii")).digest()


class PruneStats(NamedTuple):
    #: Amplitude evaluations skipped by the pruning test.
    skipped: int

    #: Amplitude evaluations considered.
    total: int

    @property
    def fraction(self) -> float:
        return self.skipped / self.total if self.total else 0.0


def prune_exponent(dk_local: MismatchVector, w_p: float) -> float:
    """Transverse Gaussian exponent -w_p²(Δk_x'² + Δk_y'²)/4."""
    if dk_local.frame is not Frame.pump_local:
        raise FrameMismatch(Frame.pump_local, dk_local.frame)
    dx, dy = float(dk_local.dk[0]), float(dk_local.dk[1])
    return -0.25 * w_p * w_p * (dx * dx + dy * dy)


def estimate_and_prune(
    dk_local: MismatchVector, w_p: float, threshold: float = DEFAULT_PRUNE_THRESHOLD
) -> bool:
    """True when the amplitude of this constituent is skipped (taken as 0)."""
    return prune_exponent(dk_local, w_p) < threshold


class Engine:
    """Runs the density computations of one job.

    Parameters
    ----------
    job : SimulationJob
    work_budget : float
        Largest number of amplitude evaluations of a single grid.
    budget_override : bool
        Run even when the estimate exceeds the budget.
    checkpoint_dir : path, optional
        Directory of the checkpoints; None disables checkpointing.
    workers : int, optional
        Number of threads of the compiled kernels, all cores by default.
    progress : bool
        Display a progress bar.
    stop_after_rows : int, optional
        Stop with RunInterrupted once this many rows are done.

    """

    def __init__(
        self,
        job: SimulationJob,
        work_budget: float = DEFAULT_WORK_BUDGET,
        budget_override: bool = False,
        checkpoint_dir: Optional[Union[str, pathlib.Path]] = None,
        workers: Optional[int] = None,
        progress: bool = False,
        stop_after_rows: Optional[int] = None,
    ) -> None:
        self.job = job
        self.work_budget = work_budget
        self.budget_override = budget_override
        self.checkpoint_dir = None if checkpoint_dir is None else pathlib.Path(checkpoint_dir)
        self.workers = workers
        self.progress = progress
        self.stop_after_rows = stop_after_rows

        #: Pruning counts of the last grid computed.
        self.last_prune_stats = PruneStats(0, 0)

        self._k_tables: Dict[Role, np.ndarray] = {}
        self._pump: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def check_budget(self, estimate: float) -> None:
        if estimate > self.work_budget:
            if not self.budget_override:
                raise BudgetExceeded(estimate, self.work_budget)
            LOGGER.warning(
                "estimated work %.3g exceeds the budget %.3g, running anyway",
                estimate, self.work_budget,
            )

    def k_table(self, role: Role) -> np.ndarray:
        if role not in self._k_tables:
            job = self.job
            self._k_tables[role] = grid_wave_vectors(
                job.crystal,
                job.grid,
                job.process.wavelength(role),
                job.process.polarization(role),
            )
        return self._k_tables[role]

    def pump_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._pump is None:
            self._pump = pump_tables(self.job.crystal, self.job.pump)
        return self._pump

    def inner_weights(self, role: Role) -> np.ndarray:
        """Area element of every cell of the partner photon."""
        grid = self.job.grid
        if not self.job.jacobian:
            return np.full(grid.n * grid.n, grid.cell_area)
        x, y = grid.mesh()
        r2 = x.ravel() ** 2 + y.ravel() ** 2 + grid.z_obs**2
        k2 = np.sum(self.k_table(role) ** 2, axis=1)
        return grid.cell_area * k2 * grid.z_obs**2 / (r2 * r2)

    @property
    def l_optic(self) -> float:
        return optic_path_length(self.job.crystal.length, self.job.pump.theta_p)

    def raw_marginal(self, role: Role) -> Tuple[np.ndarray, PruneStats]:
        """Unnormalized marginal of ``role`` and its pruning counts."""
        job = self.job
        self.check_budget(job.work_estimate())
        partner = Role.idler if role is Role.signal else Role.signal
        k_outer = self.k_table(role)
        k_inner = self.k_table(partner)
        weights = self.inner_weights(partner)
        k_pump, rows = self.pump_tables()

        def compute(start: int, stop: int, out: np.ndarray, skipped: np.ndarray) -> None:
            kernels.marginal_cells(
                k_outer,
                k_inner,
                weights,
                k_pump,
                rows,
                float(job.pump.w_p),
                self.l_optic,
                float(job.prune_threshold),
                start,
                stop,
                out,
                skipped,
            )

        values, skipped = self._run(role.value, job.fingerprint(role.value), compute)
        stats = PruneStats(int(skipped.sum()), int(job.work_estimate()))
        return values, stats

    def marginal(self, role: Role) -> DensityGrid:
        values, stats = self.raw_marginal(role)
        self.last_prune_stats = stats
        LOGGER.info(
            "%s marginal: %.1f%% of the amplitude evaluations pruned",
            role.value, 100.0 * stats.fraction,
        )
        return self._normalized(values, {"role": role.value, "kind": "marginal"}, stats)

    def conditional(self, theta_i: float, phi_i: float) -> DensityGrid:
        """Signal density given an idler emitted along (θ_i, φ_i)."""
        job = self.job
        self.check_budget(job.work_estimate(conditional=True))
        angles = DirectionAngles(theta_i, wrap_azimuth(phi_i))
        k_fixed = np.ascontiguousarray(
            wave_vector(
                job.crystal,
                job.process.lambda_i,
                direction_from_angles(angles),
                job.process.idler_pol,
            )
        )
        k_outer = self.k_table(Role.signal)
        k_pump, rows = self.pump_tables()

        def compute(start: int, stop: int, out: np.ndarray, skipped: np.ndarray) -> None:
            kernels.conditional_cells(
                k_outer,
                k_fixed,
                k_pump,
                rows,
                float(job.pump.w_p),
                self.l_optic,
                float(job.prune_threshold),
                start,
                stop,
                out,
                skipped,
            )

        fingerprint = job.fingerprint("conditional", theta_i=angles.theta, phi_i=angles.phi)
        label = "conditional_%s" % fingerprint.hex()[:12]
        values, skipped = self._run(label, fingerprint, compute)
        stats = PruneStats(int(skipped.sum()), int(job.work_estimate(conditional=True)))
        self.last_prune_stats = stats
        metadata = {
            "role": Role.signal.value,
            "kind": "conditional",
            "theta_i": angles.theta,
            "phi_i": angles.phi,
        }
        return self._normalized(values, metadata, stats)

    def _normalized(
        self, values: np.ndarray, metadata: Dict[str, Any], stats: PruneStats
    ) -> DensityGrid:
        grid = self.job.grid
        total = math.fsum(values)
        if not total > 0:
            raise PhysicsInfeasible(
                "The density vanishes on the whole grid; widen the grid or the pump waist"
            )
        metadata = dict(metadata)
        metadata["area_element"] = "jacobian" if self.job.jacobian else "xy"
        metadata["pruned"] = stats.skipped
        metadata["evaluations"] = stats.total
        scaled = values / (total * grid.cell_area)
        return DensityGrid(scaled.reshape(grid.n, grid.n), grid, Normalization.unit_sum, metadata)

    def _checkpoint_path(self, label: str) -> Optional[pathlib.Path]:
        if self.checkpoint_dir is None:
            return None
        return self.checkpoint_dir / ("%s.scck" % label)

    def _run(
        self,
        label: str,
        fingerprint: bytes,
        compute: Callable[[int, int, np.ndarray, np.ndarray], None],
    ) -> Tuple[np.ndarray, np.ndarray]:
        n = self.job.grid.n
        values = np.zeros(n * n)
        skipped = np.zeros(n * n, dtype=np.int64)
        row = 0

        path = self._checkpoint_path(label)
        if path is not None and path.exists():
            ck = checkpoint.load(path, n)
            if ck.fingerprint != fingerprint:
                raise CheckpointMismatch(
                    "Checkpoint %s belongs to a different job; remove it to start over"
                    % path
                )
            row = ck.completed_rows
            values[: row * n] = ck.values
            skipped[: row * n] = ck.skipped
            LOGGER.info("resuming %s from row %d of %d", label, row, n)

        if self.workers is not None:
            numba.set_num_threads(self.workers)

        LOGGER.info(
            "computing %s: %d x %d grid, %d pump constituents, %d threads",
            label, n, n, self.job.pump.m_phi, numba.get_num_threads(),
        )
        every = self.job.checkpoint_every
        with tqdm(total=n, initial=row, unit="row", desc=label, disable=not self.progress) as bar:
            while row < n:
                stop = min(row + every, n)
                tic = time.perf_counter()
                compute(row * n, stop * n, values, skipped)
                elapsed = time.perf_counter() - tic
                LOGGER.info(
                    "%s: rows %d-%d done, %.2f rows/s",
                    label, row, stop - 1, (stop - row) / max(elapsed, 1e-9),
                )
                bar.update(stop - row)
                row = stop
                if path is not None:
                    done = row * n
                    checkpoint.save(
                        path,
                        checkpoint.Checkpoint(fingerprint, row, values[:done], skipped[:done]),
                    )
                    LOGGER.debug("checkpoint %s saved at row %d", path, row)
                if self.stop_after_rows is not None and self.stop_after_rows <= row < n:
                    raise RunInterrupted(row, path)

        if path is not None:
            path.unlink()
        return values, skipped


def marginal_signal_density(job: SimulationJob, **options: Any) -> DensityGrid:
    """P(k_s), summed over every idler grid cell. See Engine for the options."""
    return Engine(job, **options).marginal(Role.signal)


def marginal_idler_density(job: SimulationJob, **options: Any) -> DensityGrid:
    return Engine(job, **options).marginal(Role.idler)


def conditional_signal_density(
    job: SimulationJob, theta_i: float, phi_i: float, **options: Any
) -> DensityGrid:
    return Engine(job, **options).conditional(theta_i, phi_i)


def flux_density(sig: DensityGrid, idl: DensityGrid) -> DensityGrid:
    """Cellwise P(k_s) + P(k_i), proportional to the photon flux."""
    sig.grid.check_compatible(idl.grid)
    return DensityGrid(
        sig.values + idl.values, sig.grid, Normalization.raw, {"kind": "flux"}
    )
