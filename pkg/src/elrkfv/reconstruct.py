"""WENO-AO(5,3) reconstruction, integral remapping, and face values.

Three views of the same machinery:

* per-cell reconstruction polynomials from five cell averages,
* integral remapping of uniform averages onto arbitrary (traceback)
  cells: locate the cells containing each target node, integrate the
  piecewise reconstruction exactly between them,
* one-sided face values on a nonuniform grid, obtained by feeding the
  nonuniform averages directly to the uniform-grid reconstruction (the
  per-cell linear map to the background grid preserves cell averages,
  so the auxiliary uniform averages coincide with the nonuniform ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import antideriv, basis_values, kernels
from .grid import PERIODIC, ZERO, CellField, Grid1D, check_bc

#: target cells narrower than this fraction of dx are rejected by remap_to_cells
SLIVER_TOL = 1e-14


@dataclass(frozen=True)
class WenoParams:
    """Weighting constants of the WENO-AO(5,3) reconstruction.

    ``gamma_hi`` is the linear weight of the degree-4 stencil; the
    remaining 1 - gamma_hi is split over the three degree-2 sub-stencils
    as ((1-gamma_lo)/2, gamma_lo, (1-gamma_lo)/2). Setting
    ``epsilon_w = inf`` turns off the nonlinear weighting entirely and
    yields the pure degree-4 reconstruction (used by exactness tests).
    """

    gamma_hi: float = 0.85
    gamma_lo: float = 0.85
    epsilon_w: float = 1e-12
    power_p: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.gamma_hi < 1.0:
            raise ValueError("gamma_hi must lie in (0, 1)")
        if not 0.0 < self.gamma_lo < 1.0:
            raise ValueError("gamma_lo must lie in (0, 1)")
        if not self.epsilon_w > 0.0:
            raise ValueError("epsilon_w must be positive")
        if not self.power_p > 0.0:
            raise ValueError("power_p must be positive")


DEFAULT_WENO = WenoParams()
#: linear-weight mode: the nonlinear weights collapse exactly to the linear ones
LINEAR_WENO = WenoParams(epsilon_w=math.inf)


@dataclass(frozen=True)
class ReconstructionPoly:
    """Degree <= 4 polynomial on one cell, in the local coordinate
    xi = (x - x_j)/dx with basis (1, xi, xi^2 - 1/12, xi^3, xi^4 - 1/80)."""

    cell_index: int
    coefficients: np.ndarray

    @property
    def cell_average(self) -> float:
        return float(self.coefficients[0])


def _coeffs_batch(ext: np.ndarray, params: WenoParams) -> np.ndarray:
    ext = np.ascontiguousarray(ext, dtype=np.float64)
    return kernels.weno_ao_coeffs(
        ext, params.gamma_hi, params.gamma_lo, params.epsilon_w, params.power_p
    )


def weno_ao_53(stencil, params: WenoParams = DEFAULT_WENO, cell_index: int = 0) -> ReconstructionPoly:
    """WENO-AO(5,3) polynomial of the center cell of a 5-cell stencil."""
    stencil = np.asarray(stencil, dtype=np.float64)
    if stencil.shape != (5,):
        raise ValueError(f"expected a 5-value stencil, got shape {stencil.shape}")
    if not np.all(np.isfinite(stencil)):
        raise ValueError("stencil values must be finite")
    coeffs = _coeffs_batch(stencil[None, :], params)[0, 0]
    return ReconstructionPoly(cell_index=cell_index, coefficients=coeffs)


def _local_coord(poly: ReconstructionPoly, grid: Grid1D, x: float) -> float:
    center = grid.a + (poly.cell_index + 0.5) * grid.dx
    xi = (x - center) / grid.dx
    if abs(xi) > 0.5 + 1e-12:
        raise ValueError(
            f"x={x} lies outside cell {poly.cell_index} of [{grid.a}, {grid.b}]"
        )
    return xi


def poly_eval(poly: ReconstructionPoly, grid: Grid1D, x: float) -> float:
    """Evaluate the stored polynomial at a point inside its cell."""
    xi = _local_coord(poly, grid, x)
    return float(poly.coefficients @ basis_values(xi))


def poly_partial_integral(poly: ReconstructionPoly, grid: Grid1D, x_lo: float, x_hi: float) -> float:
    """Exact integral of the stored polynomial over [x_lo, x_hi] within its cell."""
    if x_hi < x_lo:
        raise ValueError(f"inverted bounds: x_lo={x_lo} > x_hi={x_hi}")
    xi_lo = _local_coord(poly, grid, x_lo)
    xi_hi = _local_coord(poly, grid, x_hi)
    c = poly.coefficients
    return float(grid.dx * (antideriv(c, xi_hi) - antideriv(c, xi_lo)))


def _pad(avgs: np.ndarray, pad: int, bc: str) -> np.ndarray:
    n = avgs.shape[0]
    if bc == PERIODIC:
        if pad <= n:
            return np.concatenate([avgs[n - pad :], avgs, avgs[:pad]])
        reps = -(-pad // n) + 1  # enough tiled copies on each side
        tiled = np.tile(avgs, 2 * reps + 1)
        mid = reps * n
        return tiled[mid - pad : mid + n + pad]
    out = np.zeros(n + 2 * pad, dtype=np.float64)
    out[pad : pad + n] = avgs
    return out


def _extended_coeffs(avgs: np.ndarray, bc: str, params: WenoParams, reach: int):
    """Reconstruction polynomials for cells -reach .. n-1+reach.

    Returns (coeffs, reach); row k corresponds to cell k - reach of the
    original array, with ghost data from the boundary condition.
    """
    ext = _pad(np.ascontiguousarray(avgs, dtype=np.float64), reach + 2, bc)
    return _coeffs_batch(ext[None, :], params)[0]


def remap_integrals(
    avgs: np.ndarray,
    grid: Grid1D,
    target_nodes: np.ndarray,
    bc: str,
    params: WenoParams = DEFAULT_WENO,
) -> np.ndarray:
    """Integral of the reconstruction of ``avgs`` over each target cell.

    Targets may extend beyond [a, b]; ghost data follows the boundary
    condition. This is the raw signed-integral form used by the
    steppers; no width validation is applied.
    """
    check_bc(bc)
    tnodes = np.ascontiguousarray(target_nodes, dtype=np.float64)
    avgs = np.asarray(avgs, dtype=np.float64)
    if tnodes.shape[0] == grid.n_cells + 1 and np.array_equal(tnodes, grid.nodes()):
        return grid.dx * avgs
    left_exc = max(0.0, grid.a - float(np.min(tnodes)))
    right_exc = max(0.0, float(np.max(tnodes)) - grid.b)
    reach = int(math.ceil(max(left_exc, right_exc) / grid.dx)) + 1
    coeffs = _extended_coeffs(avgs, bc, params, reach)
    x0 = grid.a - reach * grid.dx
    return kernels.remap_integrals(coeffs, x0, grid.dx, tnodes)


def remap_to_cells(
    uniform: CellField,
    target_nodes: np.ndarray,
    bc: str,
    params: WenoParams = DEFAULT_WENO,
) -> np.ndarray:
    """Averages of the reconstructed field over the target cells.

    Implements the integral remapping of uniform cell averages onto a
    strictly increasing set of target nodes (one output per target cell).
    """
    check_bc(bc)
    grid = uniform.grid
    tnodes = np.asarray(target_nodes, dtype=np.float64)
    if tnodes.ndim != 1 or tnodes.shape[0] != grid.n_cells + 1:
        raise ValueError(
            f"expected {grid.n_cells + 1} target nodes, got shape {tnodes.shape}"
        )
    widths = np.diff(tnodes)
    if np.any(widths <= 0):
        raise ValueError("target nodes must be strictly increasing")
    if np.any(widths < SLIVER_TOL * grid.dx):
        raise ValueError("degenerate (zero-width) target cell")
    if bc == PERIODIC:
        span = tnodes[-1] - tnodes[0]
        if abs(span - grid.span) > 1e-10 * max(1.0, grid.span):
            raise ValueError(
                f"periodic remap requires target span {grid.span}, got {span}"
            )
    if np.array_equal(tnodes, grid.nodes()):
        return uniform.values.copy()
    integrals = remap_integrals(uniform.values, grid, tnodes, bc, params)
    return integrals / widths


def face_values_nonuniform(
    nonuniform_avgs: np.ndarray,
    traceback_nodes: np.ndarray,
    bc: str,
    params: WenoParams = DEFAULT_WENO,
):
    """One-sided values (u_minus, u_plus) at every face of a nonuniform grid.

    The nonuniform averages are used directly as the auxiliary uniform
    averages of the per-cell linear map to the background grid, so the
    reconstruction and face evaluation happen on the uniform grid.
    Arrays have length n + 1; for periodic data the first and last faces
    carry identical states.
    """
    check_bc(bc)
    avgs = np.ascontiguousarray(nonuniform_avgs, dtype=np.float64)
    n = avgs.shape[0]
    tnodes = np.asarray(traceback_nodes, dtype=np.float64)
    if tnodes.shape[0] != n + 1:
        raise ValueError(f"expected {n + 1} traceback nodes, got {tnodes.shape[0]}")
    coeffs = _extended_coeffs(avgs, bc, params, 1)
    return kernels.face_states(coeffs)
