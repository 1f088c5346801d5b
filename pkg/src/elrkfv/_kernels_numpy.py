"""Pure-numpy reconstruction kernels.

Reference implementation of the hot kernels; semantics match the numba
backend in ``_kernels_numba``. Polynomials are stored in the mean-zero
local basis on xi in [-1/2, 1/2]:

    p(xi) = c0 + c1*xi + c2*(xi^2 - 1/12) + c3*xi^3 + c4*(xi^4 - 1/80)

so that c0 is exactly the cell average of p over its own cell.
"""

from __future__ import annotations

import numpy as np

# gamma_1 = gamma_3 = (1-gamma_hi)*(1-gamma_lo)/2, gamma_2 = (1-gamma_hi)*gamma_lo


def weno_ao_coeffs(ext, gamma_hi, gamma_lo, eps_w, power_p):
    """WENO-AO(5,3) reconstruction coefficients for a batch of rows.

    Parameters
    ----------
    ext : ndarray, shape (B, m + 4)
        Cell averages with two ghost cells on each side.
    gamma_hi, gamma_lo, eps_w, power_p : float
        Linear-weight split and weighting parameters. ``eps_w = inf``
        yields exactly the linear-weight (degree-4) reconstruction.

    Returns
    -------
    coeffs : ndarray, shape (B, m, 5)
    """
    u0 = ext[:, 2:-2]
    dm2 = ext[:, :-4] - u0
    dm1 = ext[:, 1:-3] - u0
    dp1 = ext[:, 3:-1] - u0
    dp2 = ext[:, 4:] - u0

    # degree-4 fit on the five-cell stencil
    a1 = (-17.0 / 24.0) * dm1 + (5.0 / 48.0) * dm2 + (17.0 / 24.0) * dp1 - (5.0 / 48.0) * dp2
    a2 = 0.75 * (dm1 + dp1) - 0.0625 * (dm2 + dp2)
    a3 = (dm1 - dp1) / 6.0 + (dp2 - dm2) / 12.0
    a4 = -(dm1 + dp1) / 6.0 + (dm2 + dp2) / 24.0

    # degree-2 fits on the left/center/right sub-stencils
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

    tau = (np.abs(beta_hi - beta_l) + np.abs(beta_hi - beta_c) + np.abs(beta_hi - beta_r)) / 3.0

    g1 = 0.5 * (1.0 - gamma_hi) * (1.0 - gamma_lo)
    g2 = (1.0 - gamma_hi) * gamma_lo
    g3 = g1

    if np.isinf(eps_w):
        w_hi = np.full_like(tau, gamma_hi)
        w1 = np.full_like(tau, g1)
        w2 = np.full_like(tau, g2)
        w3 = np.full_like(tau, g3)
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

    coeffs = np.empty(u0.shape + (5,), dtype=np.float64)
    coeffs[..., 0] = u0
    coeffs[..., 1] = fac * a1 + q1 * l1 + q2 * c1 + q3 * r1
    coeffs[..., 2] = fac * a2 + q1 * l2 + q2 * c2 + q3 * r2
    coeffs[..., 3] = fac * a3
    coeffs[..., 4] = fac * a4
    return coeffs


def basis_values(xi):
    """Values of the five basis polynomials at local coordinate(s) xi."""
    xi = np.asarray(xi, dtype=np.float64)
    return np.stack(
        [
            np.ones_like(xi),
            xi,
            xi * xi - 1.0 / 12.0,
            xi**3,
            xi**4 - 1.0 / 80.0,
        ],
        axis=-1,
    )


def eval_poly(coeffs, xi):
    """Evaluate polynomials at local coordinate(s) xi."""
    if np.ndim(xi) == 0:
        return coeffs @ basis_values(float(xi))
    return np.einsum("...c,...c->...", coeffs, basis_values(xi))


def antideriv(coeffs, xi):
    """Antiderivative (in xi) of the stored polynomial, evaluated at xi.

    Normalized so that A(1/2) - A(-1/2) = c0 exactly in floating point.
    """
    xi = np.asarray(xi)
    xi2 = xi * xi
    return (
        coeffs[..., 0] * xi
        + coeffs[..., 1] * (xi2 / 2.0)
        + coeffs[..., 2] * (xi2 * xi / 3.0 - xi / 12.0)
        + coeffs[..., 3] * (xi2 * xi2 / 4.0)
        + coeffs[..., 4] * (xi2 * xi2 * xi / 5.0 - xi / 80.0)
    )


def _locate(s, n_cells):
    """Cell index for fractional coordinates with left-assignment at nodes."""
    idx = np.ceil(s).astype(np.int64) - 1
    return np.clip(idx, 0, n_cells - 1)


def remap_integrals(coeffs, x0, dx, tnodes):
    """Integrate the piecewise reconstruction over target cells.

    Parameters
    ----------
    coeffs : ndarray, shape (m, 5)
        Reconstruction polynomials of m consecutive cells.
    x0 : float
        Left edge of cell 0.
    dx : float
        Cell width.
    tnodes : ndarray, shape (k + 1,)
        Strictly increasing target nodes, all within [x0, x0 + m*dx].

    Returns
    -------
    integrals : ndarray, shape (k,)
    """
    m = coeffs.shape[0]
    s = (tnodes - x0) / dx
    idx = _locate(s, m)
    xi = s - idx - 0.5
    # cumulative mass up to the left edge of each cell, in units of dx
    cum = np.concatenate(([0.0], np.cumsum(coeffs[:, 0])))
    a_node = antideriv(coeffs[idx], xi) - antideriv(coeffs[idx], -0.5)
    c_node = cum[idx] + a_node
    return dx * np.diff(c_node)


def face_states(coeffs):
    """Left/right one-sided states at the faces of n consecutive cells.

    ``coeffs`` must cover cells -1..n (n + 2 rows); returns two arrays of
    length n + 1: the left limit (from the lower cell) and right limit
    (from the upper cell) at each interior face of that strip.
    """
    u_minus = eval_poly(coeffs[:-1], 0.5)
    u_plus = eval_poly(coeffs[1:], -0.5)
    return u_minus, u_plus
