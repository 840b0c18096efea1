# -*- coding: utf-8 -*-
"""16-bit binary portable graymaps for quick looks at density grids.

Format specification: http://netpbm.sourceforge.net/doc/pgm.html

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import pathlib
import re
from typing import Union

import numpy as np

from ..errors import FormatError

MAXVAL = 65535

_HEADER = re.compile(
    rb"^P5\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s(?:\s*#.*[\r\n])*"
    rb"(\d+)\s"
)


def to_gray(values: np.ndarray, gamma: float = 1.0) -> np.ndarray:
    """Map [0, max] linearly (then with a gamma) to [0, MAXVAL].

    The first image row is the largest y, so that the image is displayed with
    y pointing up.

    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    values = np.asarray(values, dtype=float)
    top = values.max() if values.size else 0.0
    scaled = values / top if top > 0 else np.zeros_like(values)
    if gamma != 1.0:
        scaled = scaled ** (1.0 / gamma)
    return np.rint(np.flipud(scaled) * MAXVAL).astype(">u2")


def write_pgm(
    path: Union[str, pathlib.Path], values: np.ndarray, gamma: float = 1.0
) -> None:
    gray = to_gray(values, gamma)
    height, width = gray.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n%d\n" % (width, height, MAXVAL))
        f.write(gray.tobytes())


def read_pgm(path: Union[str, pathlib.Path]) -> np.ndarray:
    """Pixels of a binary PGM file, first row at the top."""
    with open(path, "rb") as f:
        buffer = f.read()
    match = _HEADER.match(buffer)
    if match is None:
        raise FormatError("Not a raw PGM file: '%s'" % path)
    width, height, maxval = (int(v) for v in match.groups())
    dtype = "u1" if maxval < 256 else ">u2"
    return np.frombuffer(
        buffer, dtype=dtype, count=width * height, offset=match.end()
    ).reshape((height, width))
