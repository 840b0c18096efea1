# -*- coding: utf-8 -*-
"""Tests running the simulator at desk scale.

The desk preset (160 x 160 grid, 180 pump constituents) takes minutes per
marginal, so these tests only run when the SUPERCONE_DESK_SCALE environment
variable is set.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import os

import pytest

require_desk_scale = pytest.mark.skipif(
    "SUPERCONE_DESK_SCALE" not in os.environ,
    reason="Requires SUPERCONE_DESK_SCALE to be set.",
)
