# -*- coding: utf-8 -*-
"""Density grid files.

Layout, all little-endian::

    magic          4s   b"SCPM"
    version        u32
    n              u32  samples per axis
    half_extent    f64  meters
    z_obs          f64  meters
    normalization  u8   0 raw, 1 unit sum
    values         f64 × n², row-major, rows by ascending y, columns by ascending x

Reading a file rebuilds the DensityGrid, which revalidates the dimensions
and the normalization.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import pathlib
from typing import Union

import numpy as np

from ..engine import DensityGrid, Normalization
from ..errors import FormatError, PreconditionError
from ..kinematics import GridSpec
from .binary import Packer, Unpacker

MAGIC = b"SCPM"
VERSION = 1

#: Suffix of grid files.
SUFFIX = ".scpm"


def dumps(grid: DensityGrid) -> bytes:
    p = Packer()
    p.pack_fopaque(4, MAGIC)
    p.pack_uint(VERSION)
    p.pack_uint(grid.grid.n)
    p.pack_double(grid.grid.half_extent)
    p.pack_double(grid.grid.z_obs)
    p.pack_uchar(int(grid.normalization))
    p.pack_double_array(grid.values.ravel())
    return p.get_buffer()


def loads(data: bytes) -> DensityGrid:
    u = Unpacker(data)
    if u.unpack_fopaque(4) != MAGIC:
        raise FormatError("not a supercone grid file")
    version = u.unpack_uint()
    if version != VERSION:
        raise FormatError("unsupported grid version %d" % version)
    n = u.unpack_uint()
    half_extent = u.unpack_double()
    z_obs = u.unpack_double()
    code = u.unpack_uchar()
    try:
        normalization = Normalization(code)
    except ValueError:
        raise FormatError("unknown normalization code %d" % code) from None
    values = u.unpack_double_array(n * n)
    u.done()
    try:
        spec = GridSpec(n, half_extent, z_obs)
        return DensityGrid(values.reshape(n, n), spec, normalization)
    except PreconditionError as e:
        raise FormatError("invalid grid file: %s" % e) from None


def write_grid(path: Union[str, pathlib.Path], grid: DensityGrid) -> None:
    with open(path, "wb") as f:
        f.write(dumps(grid))


def read_grid(path: Union[str, pathlib.Path]) -> DensityGrid:
    with open(path, "rb") as f:
        return loads(f.read())


def write_csv(path: Union[str, pathlib.Path], grid: DensityGrid) -> None:
    """CSV mirror of a grid: one line per row of ascending y."""
    spec = grid.grid
    header = "n=%d half_extent_m=%r z_obs_m=%r normalization=%s" % (
        spec.n,
        spec.half_extent,
        spec.z_obs,
        grid.normalization.name,
    )
    np.savetxt(path, grid.values, fmt="%.17g", delimiter=",", header=header)
