# -*- coding: utf-8 -*-
"""Checkpoints of partially computed density grids.

Layout, all little-endian::

    magic            4s   b"SCCK"
    version          u32
    fingerprint      32s  SHA-256 of the job parameters
    completed rows   u32
    values           f64 × (completed rows × n), row-major
    pruned           u64 × (completed rows × n), pruned pump constituents per cell

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import dataclasses
import os
import pathlib
from typing import Union

import numpy as np

from ..errors import FormatError
from .binary import Packer, Unpacker

MAGIC = b"SCCK"
VERSION = 2
FINGERPRINT_SIZE = 32


@dataclasses.dataclass(frozen=True, eq=False)
class Checkpoint:
    """Rows of a grid computed so far."""

    fingerprint: bytes
    completed_rows: int

    #: Values of the completed rows, flattened.
    values: np.ndarray

    #: Pruned evaluations of the completed cells, same layout as values.
    skipped: np.ndarray

    def __post_init__(self) -> None:
        if len(self.fingerprint) != FINGERPRINT_SIZE:
            raise FormatError("fingerprints are %d bytes long" % FINGERPRINT_SIZE)
        if len(self.values) != len(self.skipped):
            raise FormatError("values and pruned counts differ in length")


def dumps(ck: Checkpoint) -> bytes:
    p = Packer()
    p.pack_fopaque(4, MAGIC)
    p.pack_uint(VERSION)
    p.pack_fopaque(FINGERPRINT_SIZE, ck.fingerprint)
    p.pack_uint(ck.completed_rows)
    p.pack_double_array(ck.values)
    p.pack_count_array(ck.skipped)
    return p.get_buffer()


def loads(data: bytes, n: int) -> Checkpoint:
    """Parse a checkpoint of a grid with n samples per axis."""
    u = Unpacker(data)
    if u.unpack_fopaque(4) != MAGIC:
        raise FormatError("not a supercone checkpoint")
    version = u.unpack_uint()
    if version != VERSION:
        raise FormatError("unsupported checkpoint version %d" % version)
    fingerprint = u.unpack_fopaque(FINGERPRINT_SIZE)
    rows = u.unpack_uint()
    if rows > n:
        raise FormatError("checkpoint holds %d rows of a %d-row grid" % (rows, n))
    values = u.unpack_double_array(rows * n)
    skipped = u.unpack_count_array(rows * n)
    u.done()
    return Checkpoint(fingerprint, rows, values, skipped)


def save(path: Union[str, pathlib.Path], ck: Checkpoint) -> None:
    """Write a checkpoint, replacing any previous one atomically."""
    path = pathlib.Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(dumps(ck))
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def load(path: Union[str, pathlib.Path], n: int) -> Checkpoint:
    with open(path, "rb") as f:
        return loads(f.read(), n)
