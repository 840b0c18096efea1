# -*- coding: utf-8 -*-
"""Run the command line with ``python -m supercone``.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import sys

from .cli import main

sys.exit(main())
