# -*- coding: utf-8 -*-
"""Test the grid, checkpoint, image and record files.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import struct

import numpy as np
import pytest

from supercone.engine import DensityGrid, Normalization
from supercone.errors import FormatError
from supercone.formats import checkpoint, grid as grid_format, pgm, records
from supercone.formats.binary import ConversionError, Packer, Unpacker
from supercone.kinematics import GridSpec


def unit_grid(n=6):
    spec = GridSpec(n, 0.25, 0.2)
    x, y = spec.mesh()
    values = np.exp(-(x**2 + 2 * y**2) / 0.01)
    values /= values.sum() * spec.cell_area
    return DensityGrid(values, spec, Normalization.unit_sum)


class TestBinary:
    def test_little_endian(self):
        p = Packer()
        p.pack_uint(1)
        p.pack_uchar(2)
        p.pack_double(1.5)
        assert p.get_buffer() == b"\x01\x00\x00\x00\x02" + struct.pack("<d", 1.5)

    def test_unpack(self):
        p = Packer()
        p.pack_fopaque(4, b"ABCD")
        p.pack_double_array(np.array([1.0, -2.0]))
        u = Unpacker(p.get_buffer())
        assert u.unpack_fopaque(4) == b"ABCD"
        np.testing.assert_array_equal(u.unpack_double_array(2), [1.0, -2.0])
        u.done()

    def test_count_array(self):
        p = Packer()
        p.pack_count_array(np.array([0, 3, 2**40]))
        assert len(p.get_buffer()) == 24
        u = Unpacker(p.get_buffer())
        np.testing.assert_array_equal(u.unpack_count_array(3), [0, 3, 2**40])

    def test_negative_count(self):
        with pytest.raises(ConversionError):
            Packer().pack_count_array(np.array([1, -1]))

    @pytest.mark.parametrize("value", [-1, 2**32])
    def test_conversion_error(self, value):
        with pytest.raises(ConversionError):
            Packer().pack_uint(value)

    def test_fopaque_length(self):
        with pytest.raises(ConversionError):
            Packer().pack_fopaque(4, b"ABC")

    def test_truncated(self):
        with pytest.raises(FormatError):
            Unpacker(b"\x01\x00").unpack_uint()

    def test_trailing_bytes(self):
        u = Unpacker(b"\x01\x00\x00\x00\xff")
        u.unpack_uint()
        with pytest.raises(FormatError):
            u.done()


class TestGridFiles:
    def test_layout(self):
        g = unit_grid(4)
        data = grid_format.dumps(g)
        assert data[:4] == b"SCPM"
        assert struct.unpack("<II", data[4:12]) == (1, 4)
        assert struct.unpack("<dd", data[12:28]) == (0.25, 0.2)
        assert data[28] == 1
        assert len(data) == 29 + 8 * 16
        first = struct.unpack("<d", data[29:37])[0]
        assert first == g.values[0, 0]

    def test_read_back(self, tmp_path):
        g = unit_grid()
        path = tmp_path / ("g" + grid_format.SUFFIX)
        grid_format.write_grid(path, g)
        back = grid_format.read_grid(path)
        assert back.grid == g.grid
        assert back.normalization is Normalization.unit_sum
        np.testing.assert_array_equal(back.values, g.values)

    def test_bad_magic(self):
        data = bytearray(grid_format.dumps(unit_grid()))
        data[:4] = b"XXXX"
        with pytest.raises(FormatError):
            grid_format.loads(bytes(data))

    def test_bad_version(self):
        data = bytearray(grid_format.dumps(unit_grid()))
        data[4:8] = struct.pack("<I", 9)
        with pytest.raises(FormatError):
            grid_format.loads(bytes(data))

    def test_truncated(self):
        with pytest.raises(FormatError):
            grid_format.loads(grid_format.dumps(unit_grid())[:-8])

    def test_unknown_normalization(self):
        data = bytearray(grid_format.dumps(unit_grid()))
        data[28] = 7
        with pytest.raises(FormatError):
            grid_format.loads(bytes(data))

    def test_revalidates_normalization(self):
        data = bytearray(grid_format.dumps(unit_grid()))
        data[29:37] = struct.pack("<d", 1e6)
        with pytest.raises(FormatError):
            grid_format.loads(bytes(data))

    def test_csv(self, tmp_path):
        g = unit_grid()
        path = tmp_path / "g.csv"
        grid_format.write_csv(path, g)
        assert path.read_text().startswith("# n=6")
        np.testing.assert_array_equal(np.loadtxt(path, delimiter=","), g.values)


def no_pruning(cells):
    return np.zeros(cells, dtype=np.int64)


class TestCheckpointFiles:
    def test_save_load(self, tmp_path):
        values = np.arange(12.0)
        skipped = np.arange(12) * 1000
        ck = checkpoint.Checkpoint(b"\x07" * 32, 3, values, skipped)
        path = tmp_path / "c.scck"
        checkpoint.save(path, ck)
        assert not (tmp_path / "c.scck.tmp").exists()
        back = checkpoint.load(path, 4)
        assert back.fingerprint == ck.fingerprint
        assert back.completed_rows == 3
        np.testing.assert_array_equal(back.values, values)
        np.testing.assert_array_equal(back.skipped, skipped)

    def test_more_rows_than_grid(self):
        ck = checkpoint.Checkpoint(b"\x00" * 32, 5, np.zeros(20), no_pruning(20))
        data = checkpoint.dumps(ck)
        with pytest.raises(FormatError):
            checkpoint.loads(data, 4)

    def test_fingerprint_size(self):
        with pytest.raises(FormatError):
            checkpoint.Checkpoint(b"short", 0, np.zeros(0), no_pruning(0))

    def test_counts_match_values(self):
        with pytest.raises(FormatError):
            checkpoint.Checkpoint(b"\x00" * 32, 1, np.zeros(4), no_pruning(3))

    def test_old_version_refused(self):
        ck = checkpoint.Checkpoint(b"\x00" * 32, 0, np.zeros(0), no_pruning(0))
        data = bytearray(checkpoint.dumps(ck))
        data[4:8] = struct.pack("<I", 1)
        with pytest.raises(FormatError):
            checkpoint.loads(bytes(data), 4)


class TestPGM:
    def test_header_and_orientation(self, tmp_path):
        values = np.zeros((3, 4))
        values[2, 0] = 2.0  # largest y, smallest x
        values[0, 3] = 1.0
        path = tmp_path / "g.pgm"
        pgm.write_pgm(path, values)
        assert path.read_bytes().startswith(b"P5\n4 3\n65535\n")
        pixels = pgm.read_pgm(path)
        assert pixels.shape == (3, 4)
        assert pixels[0, 0] == 65535
        assert pixels[2, 3] == 32768
        assert pixels.sum() == 65535 + 32768

    def test_gamma(self):
        gray = pgm.to_gray(np.array([[0.25, 1.0]]), gamma=2.0)
        assert gray[0, 0] == 32768

    def test_blank_image(self):
        assert not pgm.to_gray(np.zeros((2, 2))).any()

    def test_not_pgm(self, tmp_path):
        path = tmp_path / "x.pgm"
        path.write_bytes(b"P2\n1 1\n255\n0\n")
        with pytest.raises(FormatError):
            pgm.read_pgm(path)


class TestRecords:
    def test_metrics(self, tmp_path):
        recs = [records.MetricRecord("ring_radius", 0.1 + 0.2, "m")]
        path = tmp_path / "metrics.yaml"
        records.write_metrics(path, recs)
        assert records.read_metrics(path) == recs

    def test_invalid_metrics(self, tmp_path):
        path = tmp_path / "metrics.yaml"
        path.write_text("metric:\n  - name: x\n")
        with pytest.raises(FormatError):
            records.read_metrics(path)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("a: [1, 2\n")
        with pytest.raises(FormatError):
            records.read_yaml(path)
