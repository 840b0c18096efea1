# -*- coding: utf-8 -*-
"""Simulator for super-critically phasematched parametric downconversion.


:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

from importlib.metadata import PackageNotFoundError, version

from .common import log_to_screen
from .errors import ExitCode, SuperconeError

__version__ = "unknown"
try:
    __version__ = version("supercone-spdc")
except PackageNotFoundError:
    # package is not installed
    pass

__all__ = ["ExitCode", "SuperconeError", "__version__", "log_to_screen"]
