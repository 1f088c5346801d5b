"""Uniform 1D background grids, cell location, and CFL time-step selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIODIC = "periodic"
ZERO = "zero"
BOUNDARY_KINDS = (PERIODIC, ZERO)

#: points within this many cell widths of a node count as lying on it
NODE_TOL = 1e-12

#: speeds below this threshold count as zero for time-step selection
SPEED_FLOOR = 1e-14


def check_bc(bc: str) -> str:
    if bc not in BOUNDARY_KINDS:
        raise ValueError(f"unknown boundary condition {bc!r}; expected one of {BOUNDARY_KINDS}")
    return bc


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``n_cells`` cells on [a, b]."""

    a: float
    b: float
    n_cells: int
    dx: float = field(init=False)

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need b > a, got a={self.a}, b={self.b}")
        if self.n_cells < 1:
            raise ValueError(f"need n_cells >= 1, got {self.n_cells}")
        object.__setattr__(self, "dx", (self.b - self.a) / self.n_cells)

    @property
    def span(self) -> float:
        return self.b - self.a

    def nodes(self) -> np.ndarray:
        """Cell interface positions x_{j+1/2}, length n_cells + 1."""
        return self.a + self.dx * np.arange(self.n_cells + 1)

    def centers(self) -> np.ndarray:
        return self.a + self.dx * (np.arange(self.n_cells) + 0.5)


def make_grid(a: float, b: float, n_cells: int) -> Grid1D:
    """Build a uniform grid; rejects b <= a and n_cells < 1."""
    return Grid1D(float(a), float(b), int(n_cells))


@dataclass(frozen=True)
class CellField:
    """Cell-average values on a uniform grid at a given time."""

    grid: Grid1D
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"values shape {values.shape} does not match n_cells={self.grid.n_cells}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("cell averages must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def total_mass(self) -> float:
        return self.grid.dx * float(np.sum(self.values))


def locate_cell(grid: Grid1D, x: float, bc: str = PERIODIC) -> int:
    """0-based index of the cell containing x.

    Points on an interior node belong to the left cell; periodic inputs
    are wrapped into [a, b) first. Zero-bc points outside the domain
    beyond ``NODE_TOL * dx`` are rejected.
    """
    check_bc(bc)
    if bc == PERIODIC:
        x = grid.a + (x - grid.a) % grid.span
        if x >= grid.b:  # % may return the full span
            x = grid.a
    else:
        if x < grid.a - NODE_TOL * grid.dx or x > grid.b + NODE_TOL * grid.dx:
            raise ValueError(f"x={x} outside [{grid.a}, {grid.b}] for zero boundary conditions")
    s = (x - grid.a) / grid.dx
    r = round(s)
    if abs(s - r) <= NODE_TOL:
        idx = int(r) - 1
    else:
        idx = int(np.floor(s))
    return min(max(idx, 0), grid.n_cells - 1)


def cfl_dt_1d(cfl: float, dx: float, max_speed: float) -> float:
    """Time step from the 1D CFL relation dt = cfl*dx/max|f'|.

    Falls back to dt = cfl*dx when the maximum signal speed vanishes
    (pure-diffusion convention).
    """
    if cfl <= 0 or dx <= 0 or max_speed < 0:
        raise ValueError("need cfl > 0, dx > 0, max_speed >= 0")
    if max_speed < SPEED_FLOOR:
        return cfl * dx
    return cfl * dx / max_speed


def cfl_dt_2d(cfl: float, dx: float, dy: float, max_fx: float, max_gy: float) -> float:
    """Time step from the 2D CFL relation dt = cfl/(max|f'|/dx + max|g'|/dy)."""
    if cfl <= 0 or dx <= 0 or dy <= 0 or max_fx < 0 or max_gy < 0:
        raise ValueError("need cfl > 0, dx, dy > 0 and nonnegative speeds")
    if max_fx < SPEED_FLOOR and max_gy < SPEED_FLOOR:
        return cfl * min(dx, dy)
    return cfl / (max_fx / dx + max_gy / dy)
