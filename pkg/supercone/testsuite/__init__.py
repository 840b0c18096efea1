# -*- coding: utf-8 -*-
"""Test suite of supercone.

Fast tests run on reduced grids. The desk-scale sub-suite is gated, see
``desk_scale_tests``.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import os
from typing import List, Optional

from supercone.crystal import UniaxialCrystal, load_material

#: Crystal length used by most tests.
BBO_LENGTH = 500e-6


def bbo_crystal(length: float = BBO_LENGTH) -> UniaxialCrystal:
    """The built-in BBO record cut to ``length``."""
    return load_material("BBO", length)


def run(args: Optional[List[str]] = None) -> int:
    """Run all tests and return the pytest exit status."""
    import pytest

    return int(pytest.main([os.path.dirname(__file__)] + list(args or [])))
