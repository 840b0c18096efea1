# -*- coding: utf-8 -*-
"""Built-in material records, one YAML file per crystal.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""
