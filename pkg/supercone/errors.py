# -*- coding: utf-8 -*-
"""Exceptions raised by supercone.

Every exception carries the process exit code the command line reports for
it, so that callers can map failures without inspecting messages.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import enum
from typing import Sequence, Tuple


class ExitCode(enum.IntEnum):
    """Exit codes of the ``supercone`` command."""

    ok = 0
    failure = 1
    config_error = 2
    budget_refusal = 3
    physics_infeasible = 4


class SuperconeError(Exception):
    """Base class of all the errors raised by the package."""

    #: Exit code reported by the command line when this error escapes.
    exit_code: ExitCode = ExitCode.failure


class ConfigurationError(SuperconeError):
    """Invalid material definition, run configuration or inconsistent inputs."""

    exit_code = ExitCode.config_error


class WavelengthOutOfBand(ConfigurationError, ValueError):
    """A wavelength lies outside the band a dispersion model supports."""

    def __init__(self, wavelength: float, band_um: Tuple[float, float]) -> None:
        self.wavelength = wavelength
        self.band_um = band_um
        super().__init__(str(self))

    def __str__(self) -> str:
        return "Wavelength %.6g um outside of the supported band [%g um, %g um]" % (
            self.wavelength * 1e6,
            self.band_um[0],
            self.band_um[1],
        )

    __repr__ = __str__


class PreconditionError(SuperconeError, ValueError):
    """An argument violates the contract of the operation it is passed to."""


class FrameMismatch(PreconditionError):
    """A mismatch vector is expressed in the wrong coordinate frame."""

    def __init__(self, expected: object, got: object) -> None:
        self.expected = expected
        self.got = got
        super().__init__(str(self))

    def __str__(self) -> str:
        return "Expected a mismatch vector in the %s frame, got %s" % (
            getattr(self.expected, "name", self.expected),
            getattr(self.got, "name", self.got),
        )


class GridMismatch(PreconditionError):
    """Two density grids do not share the same sampling."""


class BudgetExceeded(SuperconeError):
    """A run would exceed the configured work budget."""

    exit_code = ExitCode.budget_refusal

    def __init__(self, estimate: float, budget: float) -> None:
        self.estimate = estimate
        self.budget = budget
        super().__init__(str(self))

    def __str__(self) -> str:
        return (
            "Estimated work of %.3g amplitude evaluations exceeds the budget of "
            "%.3g (use --budget-override to run anyway)" % (self.estimate, self.budget)
        )


class PhysicsInfeasible(SuperconeError):
    """The requested configuration cannot be realized physically."""

    exit_code = ExitCode.physics_infeasible


class NotPhasematchable(PhysicsInfeasible):
    """No crystal angle phasematches the requested process."""


class TotalInternalReflection(PhysicsInfeasible):
    """At least one ray is totally internally reflected at a face.

    The refraction reports of every ray that was traced are kept in
    ``reports`` so the caller can tell which face failed.

    """

    def __init__(self, reports: Sequence[object]) -> None:
        self.reports = tuple(reports)
        super().__init__(str(self))

    def __str__(self) -> str:
        failing = [r for r in self.reports if getattr(r, "tir", False)]
        labels = ", ".join(
            "%s at %s" % (getattr(r, "ray", "?"), getattr(r, "face", "?"))
            for r in failing
        )
        return "Total internal reflection: %s" % (labels or "unknown ray")


class CheckpointMismatch(SuperconeError):
    """A checkpoint was written for a different job and cannot be resumed."""


class RunInterrupted(SuperconeError):
    """A run stopped before completion after saving a checkpoint."""

    def __init__(self, completed_rows: int, checkpoint: object = None) -> None:
        self.completed_rows = completed_rows
        self.checkpoint = checkpoint
        super().__init__(
            "Run interrupted after %d rows (checkpoint: %s)" % (completed_rows, checkpoint)
        )


class FormatError(SuperconeError, ValueError):
    """A data file is malformed or has an unexpected layout."""
