# -*- coding: utf-8 -*-
"""Compiled inner loops of the density computations.

Every output cell is computed by one thread, summing its contributions in a
fixed index order, so results do not depend on the number of threads.
fastmath stays off: reassociation would break that guarantee.

Cells are flattened as iy·n + ix; wave-vector tables have shape (cells, 3),
pump tables (m, 3) and frame rows (m, 3, 3).

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import math

from numba import njit, prange


@njit(fastmath=False)
def amplitude_sum(sx, sy, sz, k_pump, rows, w2q, half_l, threshold):
    """Sum over pump constituents of the Gaussian amplitudes.

    (sx, sy, sz) is k_s + k_i. Returns the real and imaginary parts of the
    unnormalized sum and the number of pruned constituents.

    """
    re = 0.0
    im = 0.0
    skipped = 0
    for j in range(k_pump.shape[0]):
        dx = sx - k_pump[j, 0]
        dy = sy - k_pump[j, 1]
        dz = sz - k_pump[j, 2]
        xp = rows[j, 0, 0] * dx + rows[j, 0, 1] * dy + rows[j, 0, 2] * dz
        yp = rows[j, 1, 0] * dx + rows[j, 1, 1] * dy + rows[j, 1, 2] * dz
        expo = -w2q * (xp * xp + yp * yp)
        if expo < threshold:
            skipped += 1
            continue
        zp = rows[j, 2, 0] * dx + rows[j, 2, 1] * dy + rows[j, 2, 2] * dz
        u = half_l * zp
        su = math.sin(u)
        g = math.exp(expo)
        if u != 0.0:
            g = g * (su / u)
        re += g * math.cos(u)
        im += g * su
    return re, im, skipped


@njit(parallel=True, fastmath=False)
def marginal_cells(
    k_outer,
    k_inner,
    inner_weight,
    k_pump,
    rows,
    w_p,
    l_optic,
    threshold,
    start,
    stop,
    out,
    skipped,
):
    """Marginal density of the outer photon for cells [start, stop).

    The inner photon is summed over every cell of its grid with a
    compensated (Neumaier) running sum.

    """
    w2q = 0.25 * w_p * w_p
    half_l = 0.5 * l_optic
    m = k_pump.shape[0]
    inv_m2 = 1.0 / (m * m)
    n_inner = k_inner.shape[0]
    for a in prange(start, stop):
        total = 0.0
        comp = 0.0
        count = 0
        for b in range(n_inner):
            re, im, sk = amplitude_sum(
                k_outer[a, 0] + k_inner[b, 0],
                k_outer[a, 1] + k_inner[b, 1],
                k_outer[a, 2] + k_inner[b, 2],
                k_pump,
                rows,
                w2q,
                half_l,
                threshold,
            )
            count += sk
            p = (re * re + im * im) * inv_m2 * inner_weight[b]
            t = total + p
            if abs(total) >= abs(p):
                comp += (total - t) + p
            else:
                comp += (p - t) + total
            total = t
        out[a] = total + comp
        skipped[a] = count


@njit(parallel=True, fastmath=False)
def conditional_cells(
    k_outer, k_fixed, k_pump, rows, w_p, l_optic, threshold, start, stop, out, skipped
):
    """Density of the outer photon for cells [start, stop) given a fixed partner."""
    w2q = 0.25 * w_p * w_p
    half_l = 0.5 * l_optic
    m = k_pump.shape[0]
    inv_m2 = 1.0 / (m * m)
    for a in prange(start, stop):
        re, im, sk = amplitude_sum(
            k_outer[a, 0] + k_fixed[0],
            k_outer[a, 1] + k_fixed[1],
            k_outer[a, 2] + k_fixed[2],
            k_pump,
            rows,
            w2q,
            half_l,
            threshold,
        )
        out[a] = (re * re + im * im) * inv_m2
        skipped[a] = sk
