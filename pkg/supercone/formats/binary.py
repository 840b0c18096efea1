# -*- coding: utf-8 -*-
"""Little-endian packing of fixed-layout binary records.

Unlike XDR, fields are neither big-endian nor padded to 4 bytes: the grid
and checkpoint layouts are byte exact.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import struct
from functools import wraps
from io import BytesIO

import numpy as np

from ..errors import FormatError

__all__ = ["ConversionError", "Packer", "Unpacker"]

#: dtype of every float array stored in supercone files.
FLOAT_ARRAY = np.dtype("<f8")

#: dtype of every count array stored in supercone files.
COUNT_ARRAY = np.dtype("<u8")


class ConversionError(FormatError):
    pass


def raise_conversion_error(function):
    """Wrap any raised struct.errors in a ConversionError."""

    @wraps(function)
    def result(self, value):
        try:
            return function(self, value)
        except struct.error as e:
            raise ConversionError(e.args[0]) from None

    return result


class Packer:
    """Pack values into a buffer."""

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.__buf = BytesIO()

    def get_buffer(self) -> bytes:
        return self.__buf.getvalue()

    @raise_conversion_error
    def pack_uchar(self, x: int) -> None:
        self.__buf.write(struct.pack("<B", x))

    @raise_conversion_error
    def pack_uint(self, x: int) -> None:
        self.__buf.write(struct.pack("<I", x))

    @raise_conversion_error
    def pack_double(self, x: float) -> None:
        self.__buf.write(struct.pack("<d", x))

    def pack_fopaque(self, n: int, s: bytes) -> None:
        if len(s) != n:
            raise ConversionError("expected %d bytes, got %d" % (n, len(s)))
        self.__buf.write(s)

    def pack_double_array(self, values: np.ndarray) -> None:
        self.__buf.write(np.ascontiguousarray(values, dtype=FLOAT_ARRAY).tobytes())

    def pack_count_array(self, counts: np.ndarray) -> None:
        counts = np.asarray(counts)
        if counts.size and counts.min() < 0:
            raise ConversionError("counts must be nonnegative")
        self.__buf.write(np.ascontiguousarray(counts, dtype=COUNT_ARRAY).tobytes())


class Unpacker:
    """Unpack values from the given buffer."""

    def __init__(self, data: bytes) -> None:
        self.reset(data)

    def reset(self, data: bytes) -> None:
        self.__buf = data
        self.__pos = 0

    def get_position(self) -> int:
        return self.__pos

    def done(self) -> None:
        if self.__pos < len(self.__buf):
            raise FormatError("%d bytes of unextracted data remain" % (len(self.__buf) - self.__pos))

    def _take(self, n: int) -> bytes:
        i = self.__pos
        self.__pos = j = i + n
        data = self.__buf[i:j]
        if len(data) < n:
            raise FormatError("unexpected end of data at byte %d" % i)
        return data

    def unpack_uchar(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def unpack_uint(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def unpack_double(self) -> float:
        return struct.unpack("<d", self._take(8))[0]

    def unpack_fopaque(self, n: int) -> bytes:
        if n < 0:
            raise ValueError("opaque size must be nonnegative")
        return self._take(n)

    def unpack_double_array(self, count: int) -> np.ndarray:
        data = self._take(count * FLOAT_ARRAY.itemsize)
        return np.frombuffer(data, dtype=FLOAT_ARRAY).astype(np.float64)

    def unpack_count_array(self, count: int) -> np.ndarray:
        data = self._take(count * COUNT_ARRAY.itemsize)
        return np.frombuffer(data, dtype=COUNT_ARRAY).astype(np.int64)
