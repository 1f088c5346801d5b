"""Explicit EL-RK-FV stepping for pure convection problems.

The method-of-lines state is the vector of cell integrals over the
moving traceback cells; each Runge-Kutta stage evaluates the modified
flux difference at its abscissa on the step-wide traceback grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .characteristics import TracebackGrid, min_abs_width, nodes_with_lag, rh_speeds
from .grid import PERIODIC, CellField
from .reconstruct import DEFAULT_WENO, WenoParams, face_values_nonuniform, remap_integrals

log = logging.getLogger("elrkfv")

#: stage widths with |width| below this fraction of dx trigger dt halving
DEGENERATE_WIDTH_FRAC = 1e-6

#: safety margin on the local Lax-Friedrichs dissipation coefficient
ALPHA_MARGIN = 1.1

MAX_HALVINGS = 40


@dataclass(frozen=True)
class ButcherTable:
    """Explicit Runge-Kutta coefficients."""

    name: str
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64)
        s = b.shape[0]
        if a.shape != (s, s) or c.shape != (s,):
            raise ValueError("inconsistent Butcher table shapes")
        if np.any(np.triu(a) != 0.0):
            raise ValueError("explicit tables must be strictly lower triangular")
        if abs(b.sum() - 1.0) > 1e-14:
            raise ValueError("stage weights must sum to 1")
        if np.max(np.abs(a.sum(axis=1) - c)) > 1e-14:
            raise ValueError("abscissae must equal stage row sums")
        for name, arr in (("a", a), ("b", b), ("c", c)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def stages(self) -> int:
        return self.b.shape[0]


FORWARD_EULER = ButcherTable("forward-euler", np.zeros((1, 1)), np.array([1.0]), np.zeros(1))

SSP_RK3 = ButcherTable(
    "ssp-rk3",
    np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.25, 0.25, 0.0]]),
    np.array([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]),
    np.array([0.0, 1.0, 0.5]),
)

RK4 = ButcherTable(
    "rk4",
    np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    ),
    np.array([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]),
    np.array([0.0, 0.5, 0.5, 1.0]),
)

EXPLICIT_TABLES = {t.name: t for t in (FORWARD_EULER, SSP_RK3, RK4)}


@dataclass(frozen=True)
class ModifiedFluxContext:
    """Per-face data for the modified flux f(u) - nu*u."""

    flux: object  # callable u -> f(u) at this face's position and time
    flux_deriv: object
    nu: float
    alpha: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError("dissipation coefficient must be nonnegative")


def lax_friedrichs_modified(u_minus: float, u_plus: float, ctx: ModifiedFluxContext) -> float:
    """Lax-Friedrichs numerical flux for the modified flux function."""
    fm = ctx.flux(u_minus) - ctx.nu * u_minus
    fp = ctx.flux(u_plus) - ctx.nu * u_plus
    return 0.5 * (fm + fp) - 0.5 * ctx.alpha * (u_plus - u_minus)


def flux_divergence(
    avgs: np.ndarray,
    nodes: np.ndarray,
    speeds: np.ndarray,
    problem,
    t: float,
    params: WenoParams,
    alpha_global: bool = False,
) -> np.ndarray:
    """-(Fhat_{j+1/2} - Fhat_{j-1/2}) on a (possibly nonuniform) grid.

    Face states come from the nonuniform-to-uniform reconstruction; the
    dissipation coefficient is the local bound ALPHA_MARGIN * max
    |f'(u) - nu| over the two face states (or its global maximum).
    """
    bc = problem.bc
    u_minus, u_plus = face_values_nonuniform(avgs, nodes, bc, params)
    f_minus = problem.flux(u_minus, nodes, t)
    f_plus = problem.flux(u_plus, nodes, t)
    d_minus = problem.dflux(u_minus, nodes, t)
    d_plus = problem.dflux(u_plus, nodes, t)
    alpha = ALPHA_MARGIN * np.maximum(np.abs(d_minus - speeds), np.abs(d_plus - speeds))
    if alpha_global:
        alpha = np.full_like(alpha, alpha.max())
    fhat = 0.5 * ((f_minus - speeds * u_minus) + (f_plus - speeds * u_plus))
    fhat -= 0.5 * alpha * (u_plus - u_minus)
    if bc == PERIODIC:
        fhat[-1] = fhat[0]  # exact telescoping of the shared face
    return -np.diff(fhat)


def semidiscrete_rhs(
    tb: TracebackGrid,
    tau: float,
    nonuniform_avgs: np.ndarray,
    problem,
    t_start: float,
    params: WenoParams = DEFAULT_WENO,
    alpha_global: bool = False,
) -> np.ndarray:
    """Time derivative of the moving-cell integrals at elapsed time tau."""
    nodes = nodes_with_lag(tb.base, tb.speeds, tb.dt_full - tau)
    return flux_divergence(
        nonuniform_avgs, nodes, tb.speeds, problem, t_start + tau, params, alpha_global
    )


class _ReversedProblem:
    """Time-reversed view: stepping backward equals forward stepping of
    the mirrored problem with negated flux."""

    def __init__(self, base, t_pivot: float):
        self._base = base
        self._pivot = t_pivot
        self.bc = base.bc
        self.epsilon = base.epsilon
        self.source = None

    def flux(self, u, x, t):
        return -self._base.flux(u, x, 2.0 * self._pivot - t)

    def dflux(self, u, x, t):
        return -self._base.dflux(u, x, 2.0 * self._pivot - t)


def el_rk_step(
    field: CellField,
    table: ButcherTable,
    dt: float,
    problem,
    params: WenoParams = DEFAULT_WENO,
    *,
    speeds_override: np.ndarray | None = None,
    alpha_global: bool = False,
    max_halvings: int = MAX_HALVINGS,
) -> CellField:
    """Advance one explicit EL-RK-FV step; returns the state at t + dt.

    If the traceback partition degenerates at any stage abscissa the
    step is retried with half the size (each halving is logged), so the
    returned field may sit at an earlier time than t + dt; callers loop
    until their target time.
    """
    if problem.epsilon != 0.0:
        raise ValueError("el_rk_step handles pure convection; use el_imex_step for diffusion")
    if getattr(problem, "source", None) is not None:
        raise ValueError("el_rk_step does not support source terms")
    if dt == 0.0:
        return field
    if dt < 0.0:
        reversed_problem = _ReversedProblem(problem, field.time)
        out = el_rk_step(
            field,
            table,
            -dt,
            reversed_problem,
            params,
            speeds_override=speeds_override,
            alpha_global=alpha_global,
            max_halvings=max_halvings,
        )
        return CellField(field.grid, out.values, field.time - (out.time - field.time))

    grid = field.grid
    t0 = field.time
    if speeds_override is not None:
        speeds = np.ascontiguousarray(speeds_override, dtype=np.float64)
    else:
        speeds = rh_speeds(field, problem.flux, problem.dflux, problem.bc, t0)

    dt_try = float(dt)
    for _ in range(max_halvings + 1):
        lags = {dt_try} | {dt_try * (1.0 - ck) for ck in table.c}
        if min_abs_width(grid, speeds, lags) > DEGENERATE_WIDTH_FRAC * grid.dx:
            break
        dt_try *= 0.5
        log.warning("degenerate traceback partition at t=%.6g; halving dt to %.3g", t0, dt_try)
    else:
        raise RuntimeError(f"no valid traceback partition after {max_halvings} halvings")

    tb = TracebackGrid(grid, speeds, dt_try)
    y0 = remap_integrals(
        field.values, grid, nodes_with_lag(grid, speeds, dt_try), problem.bc, params
    )
    s = table.stages
    rhs = np.empty((s, grid.n_cells), dtype=np.float64)
    for k in range(s):
        yk = y0.copy()
        for m in range(k):
            if table.a[k, m] != 0.0:
                yk += (dt_try * table.a[k, m]) * rhs[m]
        tau = table.c[k] * dt_try
        widths = np.diff(nodes_with_lag(grid, speeds, dt_try - tau))
        rhs[k] = semidiscrete_rhs(
            tb, tau, yk / widths, problem, t0, params, alpha_global
        )
    y_new = y0 + dt_try * (table.b @ rhs)
    return CellField(grid, y_new / grid.dx, t0 + dt_try)
