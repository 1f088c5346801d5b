"""Linear approximate characteristics and traceback grids.

Face speeds come from the Rankine-Hugoniot divided difference of the
flux at time t^n; each node then travels along a straight space-time
line anchored at the uniform grid at the end of the step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PERIODIC, CellField, Grid1D, check_bc

#: absolute threshold below which neighbour averages count as equal
RH_EQUAL_TOL = 1e-8

#: partition widths below this fraction of dx are degenerate
PARTITION_TOL = 1e-12


@dataclass(frozen=True)
class TracebackGrid:
    """Per-face linear characteristics over one time step.

    Node j sits at the uniform position x_{j+1/2} at time t^n + dt_full
    and at x_{j+1/2} - speeds[j]*dt_full at time t^n.
    """

    base: Grid1D
    speeds: np.ndarray
    dt_full: float

    def __post_init__(self):
        speeds = np.ascontiguousarray(self.speeds, dtype=np.float64)
        if speeds.shape != (self.base.n_cells + 1,):
            raise ValueError(
                f"expected {self.base.n_cells + 1} face speeds, got {speeds.shape}"
            )
        if not np.all(np.isfinite(speeds)):
            raise ValueError("face speeds must be finite")
        speeds.flags.writeable = False
        object.__setattr__(self, "speeds", speeds)


def nodes_with_lag(grid: Grid1D, speeds: np.ndarray, lag: float) -> np.ndarray:
    """Node positions a (signed) time lag before the uniform anchor."""
    if lag == 0.0:
        return grid.nodes()
    return grid.nodes() - speeds * lag


def rh_speeds(field: CellField, flux, flux_deriv, bc: str, t: float | None = None) -> np.ndarray:
    """Rankine-Hugoniot face speeds from the cell averages of ``field``.

    Uses the divided difference of the flux across each face, switching
    to f'((u_l + u_r)/2) when the neighbour averages differ by less than
    ``RH_EQUAL_TOL``. Periodic grids compute the shared boundary face
    once and store it at both ends; zero grids use zero ghost states.
    """
    check_bc(bc)
    grid = field.grid
    u = field.values
    if t is None:
        t = field.time
    x_faces = grid.nodes()
    if bc == PERIODIC:
        u_left = np.concatenate([u[-1:], u])
        u_right = np.concatenate([u, u[:1]])
        x_eval = x_faces.copy()
        x_eval[-1] = x_faces[0]  # shared wrapped face, computed once
    else:
        u_left = np.concatenate([[0.0], u])
        u_right = np.concatenate([u, [0.0]])
        x_eval = x_faces
    du = u_right - u_left
    safe = np.abs(du) >= RH_EQUAL_TOL
    f_left = flux(u_left, x_eval, t)
    f_right = flux(u_right, x_eval, t)
    ratio = (f_right - f_left) / np.where(safe, du, 1.0)
    mid = flux_deriv(0.5 * (u_left + u_right), x_eval, t)
    speeds = np.where(safe, ratio, mid).astype(np.float64)
    if bc == PERIODIC:
        speeds[-1] = speeds[0]
    return speeds


def nodes_at(tb: TracebackGrid, tau: float) -> np.ndarray:
    """Node positions at elapsed time tau in [0, dt_full] within the step."""
    dt = tb.dt_full
    if tau < -1e-14 * abs(dt) or tau > dt + 1e-14 * abs(dt):
        raise ValueError(f"tau={tau} outside [0, {dt}]")
    return nodes_with_lag(tb.base, tb.speeds, dt - tau)


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    offending_cells: tuple[int, ...]
    max_admissible_dt: float

    def __bool__(self) -> bool:
        return self.ok


def validate_partition(tb: TracebackGrid) -> PartitionReport:
    """Check that all traceback cells have positive width at t^n.

    On failure the report lists the offending cells and the largest step
    for which every cell width stays positive (the crossing time of the
    worst face pair).
    """
    grid = tb.base
    dspeed = np.diff(tb.speeds)
    widths = grid.dx - dspeed * tb.dt_full
    bad = np.flatnonzero(widths <= PARTITION_TOL * grid.dx)
    converging = dspeed > 0
    if np.any(converging):
        admissible = float(np.min(grid.dx / dspeed[converging]))
    else:
        admissible = float("inf")
    return PartitionReport(
        ok=bad.size == 0,
        offending_cells=tuple(int(j) for j in bad),
        max_admissible_dt=admissible,
    )


def substage_grid(tb: TracebackGrid, c_mu: float) -> TracebackGrid:
    """Traceback grid of the sub-region spanning [t^n, t^n + c_mu*dt].

    Same characteristic speeds, anchored uniform at the intermediate
    stage time t^n + c_mu*dt_full.
    """
    if not 0.0 <= c_mu <= 1.0:
        raise ValueError(f"c_mu={c_mu} outside [0, 1]")
    return TracebackGrid(base=tb.base, speeds=tb.speeds, dt_full=c_mu * tb.dt_full)


def min_abs_width(grid: Grid1D, speeds: np.ndarray, lags) -> float:
    """Smallest |cell width| of the traceback grid over the given lags."""
    dspeed = np.diff(speeds)
    worst = np.inf
    for lag in lags:
        widths = grid.dx - dspeed * lag
        worst = min(worst, float(np.min(np.abs(widths))))
    return worst
