# -*- coding: utf-8 -*-
"""Test profiles, ring and spot metrics on synthetic densities.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import logging
import math

import numpy as np
import pytest

from supercone.amplitude import ProcessKind, ProcessSpec
from supercone.analysis import (
    Profile,
    RingMetrics,
    SliceAxis,
    conditional_widths,
    polarization_spread_estimate,
    radial_profile,
    ring_metrics,
    rotational_symmetry_error,
    slice_profile,
    standard_circles,
)
from supercone.crystal import collinear_mismatch, solve_phasematch_angle
from supercone.engine import DensityGrid, Normalization
from supercone.errors import PreconditionError
from supercone.kinematics import GridSpec, PumpSpec

from . import bbo_crystal

FWHM_PER_SIGMA = 2 * math.sqrt(2 * math.log(2))


def density(spec, f):
    x, y = spec.mesh()
    return DensityGrid(f(x, y), spec, Normalization.raw)


def ring(spec, r0, sigma):
    return density(spec, lambda x, y: np.exp(-0.5 * ((np.hypot(x, y) - r0) / sigma) ** 2))


GRID = GridSpec(201, 0.25, 0.2)


class TestProfiles:
    def test_slice_is_symmetric(self):
        g = ring(GridSpec(160, 0.25, 0.2), 0.1, 0.01)
        for axis in SliceAxis:
            p = slice_profile(g, axis)
            np.testing.assert_allclose(p.values, p.values[::-1], atol=1e-12)
            np.testing.assert_array_equal(p.coordinates, -p.coordinates[::-1])

    def test_slice_axis(self):
        g = density(GRID, lambda x, y: np.where(y == 0, 1.0, 0.0) + 0 * x)
        assert slice_profile(g, SliceAxis.y_equals_0).values.sum() == 201
        assert slice_profile(g, SliceAxis.x_equals_0).values.sum() == 1

    def test_radial_profile_of_disk(self):
        radius = 0.101
        g = density(GRID, lambda x, y: (np.hypot(x, y) < radius).astype(float))
        p = radial_profile(g)
        step = GRID.step
        inside = (p.coordinates + 0.5 * step) <= radius
        outside = (p.coordinates - 0.5 * step) > radius
        np.testing.assert_array_equal(p.values[inside], 1.0)
        np.testing.assert_array_equal(p.values[outside], 0.0)
        assert p.cell == step
        assert p.coordinates[-1] <= GRID.half_extent + step


class TestRingMetrics:
    def test_single_ring(self):
        sigma = 0.01
        rings = ring_metrics(radial_profile(ring(GRID, 0.1, sigma)))
        assert len(rings) == 1
        r = rings[0]
        assert r.radius == pytest.approx(0.1, abs=GRID.step)
        assert r.fwhm_thickness == pytest.approx(FWHM_PER_SIGMA * sigma, rel=0.05)
        assert not r.under_resolved

    def test_two_rings_on_a_slice(self):
        g = density(
            GRID,
            lambda x, y: np.exp(-0.5 * ((np.hypot(x, y) - 0.08) / 0.008) ** 2)
            + 0.5 * np.exp(-0.5 * ((np.hypot(x, y) - 0.16) / 0.008) ** 2),
        )
        rings = ring_metrics(slice_profile(g, SliceAxis.y_equals_0))
        assert len(rings) == 4
        assert [round(r.radius, 2) for r in rings] == [0.16, 0.08, 0.08, 0.16]

    def test_small_bumps_are_ignored(self):
        p = Profile(np.arange(7.0), np.array([0, 1.0, 0, 0.01, 0, 0.5, 0]), 1.0)
        rings = ring_metrics(p)
        assert [r.radius for r in rings] == [1.0, 5.0]

    def test_under_resolved(self, caplog):
        p = Profile(np.arange(5.0), np.array([0, 0.1, 1.0, 0.1, 0]), 1.0)
        with caplog.at_level(logging.WARNING, logger="supercone"):
            (r,) = ring_metrics(p)
        assert r.under_resolved
        assert "under-resolved" in caplog.text

    def test_empty(self):
        assert ring_metrics(Profile(np.arange(3.0), np.zeros(3), 1.0)) == []

    def test_invalid_ring(self):
        with pytest.raises(PreconditionError):
            RingMetrics(0.0, 1.0, 1.0)


class TestConditionalWidths:
    def spot(self, ix, iy, sigma):
        c = GRID.coordinates()
        x0, y0 = c[ix], c[iy]
        return density(
            GRID, lambda x, y: np.exp(-0.5 * ((x - x0) ** 2 + (y - y0) ** 2) / sigma**2)
        )

    def test_isotropic_spot(self):
        sigma = 0.006
        g = self.spot(150, 120, sigma)
        r = RingMetrics(math.hypot(GRID.coordinates()[150], GRID.coordinates()[120]), 0.05, 1.0)
        w = conditional_widths(g, r)
        fwhm = FWHM_PER_SIGMA * sigma
        assert w.fwhm_radial == pytest.approx(fwhm, rel=0.03)
        assert w.fwhm_azimuthal == pytest.approx(fwhm, rel=0.03)
        assert w.frac_of_ring_thickness == pytest.approx(w.fwhm_radial / 0.05)
        assert w.frac_of_circumference == pytest.approx(
            w.fwhm_azimuthal / (2 * math.pi * r.radius)
        )
        assert w.peak == (GRID.coordinates()[150], GRID.coordinates()[120])
        assert w.reliable

    def test_elongated_spot(self):
        c = GRID.coordinates()
        g = density(
            GRID,
            lambda x, y: np.exp(-0.5 * ((x - c[160]) / 0.004) ** 2 - 0.5 * (y / 0.012) ** 2),
        )
        w = conditional_widths(g, RingMetrics(c[160], 0.05, 1.0))
        assert w.fwhm_radial < w.fwhm_azimuthal

    def test_peak_on_boundary(self):
        with pytest.raises(PreconditionError):
            conditional_widths(self.spot(200, 100, 0.01), RingMetrics(0.2, 0.05, 1.0))

    def test_uniform_density(self):
        g = density(GRID, lambda x, y: np.ones_like(x))
        with pytest.raises(PreconditionError):
            conditional_widths(g, RingMetrics(0.1, 0.05, 1.0))

    def test_faint_spot_is_unreliable(self):
        g = density(
            GRID,
            lambda x, y: 1.0 + 0.5 * np.exp(-0.5 * ((x - 0.1) ** 2 + y**2) / 0.006**2),
        )
        w = conditional_widths(g, RingMetrics(0.1, 0.05, 1.0))
        assert not w.reliable


class TestSymmetry:
    def test_annular_field(self):
        bins = np.floor(np.hypot(*GRID.mesh()) / GRID.step)
        g = DensityGrid(np.exp(-0.5 * ((bins - 40) / 8.0) ** 2), GRID, Normalization.raw)
        assert rotational_symmetry_error(g) < 1e-12

    def test_asymmetric_field(self):
        g = density(
            GRID,
            lambda x, y: (1 + 0.5 * np.cos(np.arctan2(y, x)))
            * np.exp(-0.5 * ((np.hypot(x, y) - 0.1) / 0.01) ** 2),
        )
        assert rotational_symmetry_error(g) > 0.2

    def test_empty(self):
        assert rotational_symmetry_error(density(GRID, lambda x, y: 0 * x)) == 0.0


@pytest.fixture(scope="module")
def setup():
    crystal = bbo_crystal()
    process = ProcessSpec.create(ProcessKind.type_ii, 405e-9)
    theta_p = solve_phasematch_angle(crystal, 405e-9, process)
    pump = PumpSpec(405e-9, theta_p, 84e-6, 180)
    return crystal, process, pump


class TestStandardCircles:
    def test_pass_through_pump_direction(self, setup):
        crystal, process, pump = setup
        circles = standard_circles(crystal, process, pump, 0.2)
        assert len(circles.signal) > 100
        assert circles.signal.shape == circles.idler.shape
        center = np.array([0.2 * math.tan(pump.theta_p), 0.0])
        for curve in circles:
            assert np.min(np.linalg.norm(curve - center, axis=1)) < 1e-3

    def test_rotated_constituent(self, setup):
        crystal, process, pump = setup
        a = standard_circles(crystal, process, pump, 0.2, phi_p=0.0, samples=360)
        b = standard_circles(crystal, process, pump, 0.2, phi_p=math.pi / 2, samples=360)
        rotated = np.stack([-a.signal[:, 1], a.signal[:, 0]], axis=-1)
        assert np.max(np.min(np.linalg.norm(b.signal[:, None] - rotated[None], axis=-1), axis=1)) < 5e-3


class TestPolarizationSpread:
    def test_spread_grows_with_thickness(self, setup):
        crystal, process, pump = setup
        radius = 0.2 * math.tan(pump.theta_p)
        thin = polarization_spread_estimate(
            crystal, process, pump, RingMetrics(radius, 2e-3, 1.0), 0.2
        )
        thick = polarization_spread_estimate(
            crystal, process, pump, RingMetrics(radius, 4e-3, 1.0), 0.2
        )
        assert 0 < thin <= thick < math.radians(30)

    @pytest.mark.parametrize("length", [250e-6, 500e-6])
    def test_longer_crystal_narrows_spread(self, setup, length):
        _, process, pump = setup
        theta, h = pump.theta_p, 1e-6

        def spread(crystal):
            slope = (
                collinear_mismatch(crystal, process, theta + h)
                - collinear_mismatch(crystal, process, theta - h)
            ) / (2 * h)
            # first zero of the sinc, projected on the observation plane
            thickness = 0.2 * 2 * math.pi / (crystal.length * abs(slope))
            ring = RingMetrics(0.2 * math.tan(theta), thickness, 1.0)
            return polarization_spread_estimate(crystal, process, pump, ring, 0.2)

        crystal = bbo_crystal(length)
        single, doubled = spread(crystal), spread(crystal.with_length(2 * length))
        assert 0 <= doubled < single

    def test_vanishing_thickness(self, setup):
        crystal, process, pump = setup
        radius = 0.2 * math.tan(pump.theta_p)
        spread = polarization_spread_estimate(
            crystal, process, pump, RingMetrics(radius, 1e-9, 1.0), 0.2
        )
        assert spread == 0.0

    def test_requires_type_ii(self, setup):
        crystal, _, pump = setup
        process = ProcessSpec.create(ProcessKind.type_i, 405e-9)
        with pytest.raises(PreconditionError):
            polarization_spread_estimate(
                crystal, process, pump, RingMetrics(0.18, 4e-3, 1.0), 0.2
            )
