# -*- coding: utf-8 -*-
"""Test grids, directions and frame changes.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import logging
import math

import numpy as np
import pytest

from supercone.amplitude import ProcessKind, ProcessSpec
from supercone.crystal import (
    PolarizationClass,
    solve_phasematch_angle,
    wave_vector,
)
from supercone.errors import FrameMismatch, GridMismatch, PreconditionError
from supercone.kinematics import (
    DirectionAngles,
    Frame,
    GridSpec,
    MismatchVector,
    PumpSpec,
    angles_from_grid,
    direction_from_angles,
    frame_rows,
    grid_point_from_angles,
    grid_wave_vectors,
    mismatch_crystal,
    pump_central_k,
    pump_tables,
    to_pump_frame,
    wrap_azimuth,
)

from . import bbo_crystal

ANGLES = [(0.1, 0.0), (math.radians(41.8), 0.7), (math.radians(28.7), 3.5), (1.2, 6.0)]


@pytest.mark.parametrize("theta_p, phi_p", ANGLES)
def test_frame_rows_are_a_rotation(theta_p, phi_p):
    r = frame_rows(theta_p, phi_p)
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-14)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(
        r[2], direction_from_angles(DirectionAngles(theta_p, phi_p)), atol=1e-15
    )


@pytest.mark.parametrize("theta_p, phi_p", ANGLES)
def test_to_pump_frame_preserves_norm(theta_p, phi_p):
    m = MismatchVector(np.array([1.5e5, -2.0e4, 3.3e6]), Frame.crystal_xyz)
    local = to_pump_frame(m, theta_p, phi_p)
    assert local.frame is Frame.pump_local
    assert local.norm == pytest.approx(m.norm, rel=1e-9)


@pytest.mark.parametrize("theta_p, phi_p", ANGLES)
@pytest.mark.parametrize("delta", [0.3, math.pi / 2, 2.9, -1.1])
def test_to_pump_frame_is_azimuthally_covariant(theta_p, phi_p, delta):
    dk = np.array([1.5e5, -2.0e4, 3.3e6])
    c, s = math.cos(delta), math.sin(delta)
    rz = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    want = to_pump_frame(MismatchVector(dk, Frame.crystal_xyz), theta_p, phi_p)
    got = to_pump_frame(MismatchVector(rz @ dk, Frame.crystal_xyz), theta_p, phi_p + delta)
    np.testing.assert_allclose(got.dk, want.dk, rtol=0, atol=1e-12 * np.linalg.norm(dk))


def test_to_pump_frame_rejects_local_vectors():
    m = MismatchVector(np.zeros(3), Frame.pump_local)
    with pytest.raises(FrameMismatch):
        to_pump_frame(m, 0.5, 0.0)


def test_mismatch_vector_shape():
    with pytest.raises(PreconditionError):
        MismatchVector(np.zeros(2), Frame.crystal_xyz)


@pytest.mark.parametrize(
    "x, y, theta, phi",
    [
        (0.0, 0.0, 0.0, 0.0),
        (0.2, 0.0, math.pi / 4, 0.0),
        (0.0, 0.2, math.pi / 4, math.pi / 2),
        (-0.2, 0.0, math.pi / 4, math.pi),
        (0.0, -0.2, math.pi / 4, 1.5 * math.pi),
    ],
)
def test_angles_from_grid(x, y, theta, phi):
    a = angles_from_grid(x, y, 0.2)
    assert a.theta == pytest.approx(theta, abs=1e-15)
    assert a.phi == pytest.approx(phi, abs=1e-14)
    gx, gy = grid_point_from_angles(a, 0.2)
    assert gx == pytest.approx(x, abs=1e-15)
    assert gy == pytest.approx(y, abs=1e-15)


def test_angles_from_grid_requires_positive_z():
    with pytest.raises(PreconditionError):
        angles_from_grid(0.1, 0.1, 0.0)


@pytest.mark.parametrize("theta, phi", [(-0.1, 0.0), (math.pi / 2, 0.0), (0.1, 2 * math.pi)])
def test_invalid_direction_angles(theta, phi):
    with pytest.raises(PreconditionError):
        DirectionAngles(theta, phi)


@pytest.mark.parametrize(
    "phi, want",
    [(0.0, 0.0), (-0.1, 2 * math.pi - 0.1), (2 * math.pi, 0.0), (7.0, 7.0 - 2 * math.pi)],
)
def test_wrap_azimuth(phi, want):
    assert wrap_azimuth(phi) == pytest.approx(want, abs=1e-15)
    assert 0 <= wrap_azimuth(phi) < 2 * math.pi


class TestGridSpec:
    def test_coordinates(self):
        g = GridSpec(5, 0.2, 0.1)
        np.testing.assert_allclose(g.coordinates(), [-0.2, -0.1, 0.0, 0.1, 0.2], atol=1e-16)
        assert g.step == pytest.approx(0.1)
        assert g.cell_area == pytest.approx(0.01)

    def test_coordinates_are_symmetric(self):
        c = GridSpec(160, 0.25, 0.2).coordinates()
        np.testing.assert_array_equal(c, -c[::-1])

    def test_mesh_indexing(self):
        g = GridSpec(4, 1.0, 1.0)
        c = g.coordinates()
        x, y = g.mesh()
        assert x[0, 0] == x[3, 0] == c[0]
        assert y[0, 0] == y[0, 3] == c[0]
        assert x[0, 3] == y[3, 0] == c[3]

    @pytest.mark.parametrize("args", [(1, 0.1, 0.1), (4, 0.0, 0.1), (4, 0.1, -1.0)])
    def test_invalid(self, args):
        with pytest.raises(PreconditionError):
            GridSpec(*args)

    def test_compatible(self):
        GridSpec(4, 0.1, 0.2).check_compatible(GridSpec(4, 0.1, 0.2))
        with pytest.raises(GridMismatch):
            GridSpec(4, 0.1, 0.2).check_compatible(GridSpec(5, 0.1, 0.2))


class TestPumpSpec:
    def test_phi_samples(self):
        pump = PumpSpec(405e-9, 0.7, 84e-6, 8)
        np.testing.assert_allclose(pump.phi_samples(), np.arange(8) * math.pi / 4)

    def test_coarse_sampling_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="supercone"):
            PumpSpec(405e-9, 0.7, 84e-6, 1)
        assert "m_phi = 1" in caplog.text

    @pytest.mark.parametrize(
        "args", [(405e-9, 0.0, 84e-6, 8), (405e-9, 0.7, 0.0, 8), (405e-9, 0.7, 84e-6, 0)]
    )
    def test_invalid(self, args):
        with pytest.raises(PreconditionError):
            PumpSpec(*args)


@pytest.fixture(scope="module")
def bbo():
    return bbo_crystal()


def test_pump_tables(bbo):
    pump = PumpSpec(405e-9, math.radians(41.8), 84e-6, 12)
    k_p, rows = pump_tables(bbo, pump)
    assert k_p.shape == (12, 3) and rows.shape == (12, 3, 3)
    norms = np.linalg.norm(k_p, axis=1)
    np.testing.assert_allclose(norms, norms[0], rtol=1e-14)
    for j in range(12):
        np.testing.assert_allclose(k_p[j] / norms[j], rows[j, 2], atol=1e-15)


def test_grid_wave_vectors(bbo):
    grid = GridSpec(6, 0.25, 0.2)
    k = grid_wave_vectors(bbo, grid, 810e-9, PolarizationClass.ordinary)
    assert k.shape == (36, 3)
    n_o = bbo.principal_indices(810e-9).n_x
    np.testing.assert_allclose(np.linalg.norm(k, axis=1), 2 * math.pi * n_o / 810e-9)
    x, y = grid.mesh()
    np.testing.assert_allclose(k[:, 0] / k[:, 2], x.ravel() / grid.z_obs, rtol=1e-12)


def test_collinear_phasematch_has_no_mismatch(bbo):
    process = ProcessSpec.create(ProcessKind.type_ii, 405e-9)
    theta = solve_phasematch_angle(bbo, 405e-9, process)
    pump = PumpSpec(405e-9, theta, 84e-6, 8)
    s = direction_from_angles(DirectionAngles(theta, 0.3))
    k_s = wave_vector(bbo, 810e-9, s, PolarizationClass.extraordinary)
    k_i = wave_vector(bbo, 810e-9, s, PolarizationClass.ordinary)
    n_p = np.linalg.norm(wave_vector(bbo, 405e-9, s, PolarizationClass.extraordinary))
    k_p = pump_central_k(pump, 0.3, n_p * 405e-9 / (2 * math.pi))
    local = to_pump_frame(mismatch_crystal(k_s, k_i, k_p), theta, 0.3)
    assert local.norm < 1e-6 * np.linalg.norm(k_p)
    assert abs(local.dk[0]) < 1e-3 and abs(local.dk[1]) < 1e-3
