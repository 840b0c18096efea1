# -*- coding: utf-8 -*-
"""File formats written and read by supercone.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""
