"""Numba-compiled reconstruction kernels.

Loop versions of the kernels in ``_kernels_numpy``; both backends must
produce the same numbers up to floating-point association order.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def weno_ao_coeffs(ext, gamma_hi, gamma_lo, eps_w, power_p):
    nb = ext.shape[0]
    m = ext.shape[1] - 4
    coeffs = np.empty((nb, m, 5), dtype=np.float64)
    g1 = 0.5 * (1.0 - gamma_hi) * (1.0 - gamma_lo)
    g2 = (1.0 - gamma_hi) * gamma_lo
    g3 = g1
    linear = not np.isfinite(eps_w)
    for b in range(nb):
        for j in range(m):
            u0 = ext[b, j + 2]
            dm2 = ext[b, j] - u0
            dm1 = ext[b, j + 1] - u0
            dp1 = ext[b, j + 3] - u0
            dp2 = ext[b, j + 4] - u0

            a1 = (-17.0 / 24.0) * dm1 + (5.0 / 48.0) * dm2 + (17.0 / 24.0) * dp1 - (5.0 / 48.0) * dp2
            a2 = 0.75 * (dm1 + dp1) - 0.0625 * (dm2 + dp2)
            a3 = (dm1 - dp1) / 6.0 + (dp2 - dm2) / 12.0
            a4 = -(dm1 + dp1) / 6.0 + (dm2 + dp2) / 24.0

            l1 = 0.5 * dm2 - 2.0 * dm1
            l2 = 0.5 * dm2 - dm1
            c1 = 0.5 * (dp1 - dm1)
            c2 = 0.5 * (dp1 + dm1)
            r1 = 2.0 * dp1 - 0.5 * dp2
            r2 = 0.5 * dp2 - dp1

            beta_l = l1 * l1 + (13.0 / 3.0) * l2 * l2
            beta_c = c1 * c1 + (13.0 / 3.0) * c2 * c2
            beta_r = r1 * r1 + (13.0 / 3.0) * r2 * r2
            beta_hi = (
                a1 * a1
                + 0.5 * a1 * a3
                + (13.0 / 3.0) * a2 * a2
                + (21.0 / 5.0) * a2 * a4
                + (3129.0 / 80.0) * a3 * a3
                + (87617.0 / 140.0) * a4 * a4
            )

            tau = (abs(beta_hi - beta_l) + abs(beta_hi - beta_c) + abs(beta_hi - beta_r)) / 3.0

            if linear:
                w_hi = gamma_hi
                w1 = g1
                w2 = g2
                w3 = g3
            else:
                w_hi = gamma_hi * (1.0 + (tau / (beta_hi + eps_w)) ** power_p)
                w1 = g1 * (1.0 + (tau / (beta_l + eps_w)) ** power_p)
                w2 = g2 * (1.0 + (tau / (beta_c + eps_w)) ** power_p)
                w3 = g3 * (1.0 + (tau / (beta_r + eps_w)) ** power_p)
            norm = w_hi + w1 + w2 + w3
            w_hi = w_hi / norm
            w1 = w1 / norm
            w2 = w2 / norm
            w3 = w3 / norm

            fac = w_hi / gamma_hi
            q1 = w1 - fac * g1
            q2 = w2 - fac * g2
            q3 = w3 - fac * g3

            coeffs[b, j, 0] = u0
            coeffs[b, j, 1] = fac * a1 + q1 * l1 + q2 * c1 + q3 * r1
            coeffs[b, j, 2] = fac * a2 + q1 * l2 + q2 * c2 + q3 * r2
            coeffs[b, j, 3] = fac * a3
            coeffs[b, j, 4] = fac * a4
    return coeffs


@njit(cache=True, inline="always")
def _eval_one(c0, c1, c2, c3, c4, xi):
    xi2 = xi * xi
    return c0 + c1 * xi + c2 * (xi2 - 1.0 / 12.0) + c3 * xi2 * xi + c4 * (xi2 * xi2 - 1.0 / 80.0)


@njit(cache=True, inline="always")
def _antideriv_one(c0, c1, c2, c3, c4, xi):
    xi2 = xi * xi
    return (
        c0 * xi
        + c1 * (xi2 / 2.0)
        + c2 * (xi2 * xi / 3.0 - xi / 12.0)
        + c3 * (xi2 * xi2 / 4.0)
        + c4 * (xi2 * xi2 * xi / 5.0 - xi / 80.0)
    )


@njit(cache=True)
def remap_integrals(coeffs, x0, dx, tnodes):
    m = coeffs.shape[0]
    nt = tnodes.shape[0]
    c_node = np.empty(nt, dtype=np.float64)
    cum_cells = np.empty(m + 1, dtype=np.float64)
    cum_cells[0] = 0.0
    for i in range(m):
        cum_cells[i + 1] = cum_cells[i] + coeffs[i, 0]
    for k in range(nt):
        s = (tnodes[k] - x0) / dx
        idx = int(np.ceil(s)) - 1
        if idx < 0:
            idx = 0
        elif idx > m - 1:
            idx = m - 1
        xi = s - idx - 0.5
        a = _antideriv_one(
            coeffs[idx, 0], coeffs[idx, 1], coeffs[idx, 2], coeffs[idx, 3], coeffs[idx, 4], xi
        ) - _antideriv_one(
            coeffs[idx, 0], coeffs[idx, 1], coeffs[idx, 2], coeffs[idx, 3], coeffs[idx, 4], -0.5
        )
        c_node[k] = cum_cells[idx] + a
    out = np.empty(nt - 1, dtype=np.float64)
    for k in range(nt - 1):
        out[k] = dx * (c_node[k + 1] - c_node[k])
    return out


@njit(cache=True)
def face_states(coeffs):
    n = coeffs.shape[0] - 1
    u_minus = np.empty(n, dtype=np.float64)
    u_plus = np.empty(n, dtype=np.float64)
    for k in range(n):
        u_minus[k] = _eval_one(
            coeffs[k, 0], coeffs[k, 1], coeffs[k, 2], coeffs[k, 3], coeffs[k, 4], 0.5
        )
        u_plus[k] = _eval_one(
            coeffs[k + 1, 0], coeffs[k + 1, 1], coeffs[k + 1, 2], coeffs[k + 1, 3], coeffs[k + 1, 4], -0.5
        )
    return u_minus, u_plus
