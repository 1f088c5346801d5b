import math

import numpy as np
import pytest

from elrkfv import _kernels_numba, _kernels_numpy
from elrkfv.grid import PERIODIC, ZERO, CellField, make_grid
from elrkfv.reconstruct import (
    DEFAULT_WENO,
    LINEAR_WENO,
    WenoParams,
    face_values_nonuniform,
    poly_eval,
    poly_partial_integral,
    remap_integrals,
    remap_to_cells,
    weno_ao_53,
)


def quartic_cell_averages(coeffs, nodes):
    """Exact cell averages of a polynomial given by ``coeffs`` (low-to-high)."""
    poly = np.polynomial.Polynomial(coeffs)
    anti = poly.integ()
    return np.diff(anti(nodes)) / np.diff(nodes)


def x4_stencil():
    # exact averages of x^4 over unit cells centered at -2..2
    return np.array([c**4 + c**2 / 2 + 1.0 / 80.0 for c in range(-2, 3)])


def test_constant_reproduction():
    grid = make_grid(-2.5, 2.5, 5)
    poly = weno_ao_53(np.full(5, 3.7), cell_index=2)
    for x in (-0.5, -0.2, 0.0, 0.31, 0.5):
        assert poly_eval(poly, grid, x) == pytest.approx(3.7, abs=1e-14)


def test_cell_average_consistency_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        stencil = rng.normal(scale=rng.uniform(0.1, 100.0), size=5)
        poly = weno_ao_53(stencil)
        scale = max(1.0, np.max(np.abs(stencil)))
        assert abs(poly.cell_average - stencil[2]) <= 1e-12 * scale


def test_quartic_exactness_linear_mode():
    grid = make_grid(-2.5, 2.5, 5)
    poly = weno_ao_53(x4_stencil(), LINEAR_WENO, cell_index=2)
    for x in np.linspace(-0.5, 0.5, 11):
        assert poly_eval(poly, grid, x) == pytest.approx(x**4, abs=1e-12)


def test_step_data_no_overshoot_default_params():
    stencil = np.array([0.0, 0.0, 0.0, 1.0, 1.0])
    grid = make_grid(-2.5, 2.5, 5)
    poly = weno_ao_53(stencil, cell_index=2)
    for x in (-0.5, 0.5):
        v = poly_eval(poly, grid, x)
        assert -1e-10 <= v <= 1.0 + 1e-10


def test_poly_eval_linear_data_midpoint():
    grid = make_grid(0.0, 5.0, 5)
    poly = weno_ao_53(np.array([1.0, 2.0, 3.0, 4.0, 5.0]), cell_index=2)
    assert poly_eval(poly, grid, 2.5) == pytest.approx(3.0, abs=1e-13)


def test_poly_eval_quartic_face_value():
    grid = make_grid(-2.5, 2.5, 5)
    poly = weno_ao_53(x4_stencil(), LINEAR_WENO, cell_index=2)
    assert poly_eval(poly, grid, 0.5) == pytest.approx(0.5**4, abs=1e-12)


def test_poly_eval_out_of_cell_rejected():
    grid = make_grid(0.0, 5.0, 5)
    poly = weno_ao_53(np.ones(5), cell_index=2)
    with pytest.raises(ValueError):
        poly_eval(poly, grid, 3.7)


def test_poly_partial_integral_cases():
    grid = make_grid(-2.5, 2.5, 5)
    const = weno_ao_53(np.full(5, 2.5), cell_index=2)
    assert poly_partial_integral(const, grid, 0.1, 0.1) == 0.0
    assert poly_partial_integral(const, grid, -0.5, 0.5) == pytest.approx(2.5, rel=1e-14)
    quartic = weno_ao_53(x4_stencil(), LINEAR_WENO, cell_index=2)
    # integral over the left half-cell of x^4 is 1/160
    assert poly_partial_integral(quartic, grid, -0.5, 0.0) == pytest.approx(
        1.0 / 160.0, abs=1e-12
    )
    with pytest.raises(ValueError):
        poly_partial_integral(quartic, grid, 0.2, -0.2)


def test_remap_identity_is_exact():
    rng = np.random.default_rng(3)
    grid = make_grid(0.0, 2 * math.pi, 64)
    values = rng.normal(size=64)
    field = CellField(grid, values)
    out = remap_to_cells(field, grid.nodes(), PERIODIC)
    assert np.array_equal(out, values)


def test_remap_constant_preserved():
    grid = make_grid(0.0, 1.0, 40)
    field = CellField(grid, np.full(40, 4.2))
    rng = np.random.default_rng(5)
    shift = 0.35 * grid.dx * np.sin(2 * math.pi * np.arange(41) / 40 + rng.uniform(0, 6))
    out = remap_to_cells(field, grid.nodes() + shift, PERIODIC)
    np.testing.assert_allclose(out, 4.2, atol=1e-13)


def test_remap_shifted_sine_matches_analytic_averages():
    grid = make_grid(0.0, 2 * math.pi, 100)
    nodes = grid.nodes()
    field = CellField(grid, quartic_sine_averages(nodes))
    targets = nodes + 0.3 * grid.dx
    out = remap_to_cells(field, targets, PERIODIC)
    exact = quartic_sine_averages(targets)
    assert np.max(np.abs(out - exact)) <= 30 * grid.dx**5


def quartic_sine_averages(nodes):
    return np.diff(-np.cos(nodes)) / np.diff(nodes)


def test_remap_fifth_order_on_sine():
    errs = []
    for n in (50, 100, 200, 400):
        grid = make_grid(0.0, 2 * math.pi, n)
        nodes = grid.nodes()
        field = CellField(grid, quartic_sine_averages(nodes))
        targets = nodes + 0.37 * grid.dx
        out = remap_to_cells(field, targets, PERIODIC)
        errs.append(np.max(np.abs(out - quartic_sine_averages(targets))))
    for e_coarse, e_fine in zip(errs, errs[1:]):
        assert e_coarse / e_fine >= 2**4.5


def test_remap_conservation_random_fields():
    rng = np.random.default_rng(11)
    grid = make_grid(0.0, 2 * math.pi, 48)
    nodes = grid.nodes()
    x = grid.centers()
    for _ in range(100):
        values = np.zeros(48)
        for k in range(1, 6):
            values += rng.normal() * np.cos(k * x) + rng.normal() * np.sin(k * x)
        amp = rng.uniform(0.0, 0.45)
        phase = rng.uniform(0, 2 * math.pi)
        shift = amp * grid.dx * np.sin(2 * math.pi * np.arange(49) / 48 + phase)
        shift += rng.uniform(-3, 3) * grid.dx  # rigid offset keeps the span
        targets = nodes + shift
        field = CellField(grid, values)
        out = remap_to_cells(field, targets, PERIODIC)
        mass_in = grid.dx * values.sum()
        mass_out = float(np.sum(np.diff(targets) * out))
        scale = max(abs(mass_in), grid.dx * np.abs(values).sum())
        assert abs(mass_out - mass_in) <= 1e-12 * scale


def test_remap_rejects_bad_targets():
    grid = make_grid(0.0, 1.0, 16)
    field = CellField(grid, np.ones(16))
    nodes = grid.nodes()
    bad = nodes.copy()
    bad[3] = bad[4]  # zero-width cell
    with pytest.raises(ValueError):
        remap_to_cells(field, bad, PERIODIC)
    with pytest.raises(ValueError):
        remap_to_cells(field, nodes[::-1], PERIODIC)
    stretched = nodes * 1.01  # span mismatch under periodic bc
    with pytest.raises(ValueError):
        remap_to_cells(field, stretched, PERIODIC)


def test_remap_polynomial_exactness_interior():
    rng = np.random.default_rng(19)
    grid = make_grid(0.0, 2 * math.pi, 64)
    nodes = grid.nodes()
    for _ in range(20):
        coeffs = rng.uniform(-1, 1, size=5)
        values = quartic_cell_averages(coeffs, nodes)
        shift = 0.4 * grid.dx * np.sin(2 * math.pi * np.arange(65) / 64 + rng.uniform(0, 6))
        targets = nodes + shift
        field = CellField(grid, values)
        out = remap_to_cells(field, targets, PERIODIC, LINEAR_WENO)
        exact = quartic_cell_averages(coeffs, targets)
        scale = np.max(np.abs(values))
        interior = slice(4, 60)
        assert np.max(np.abs((out - exact)[interior])) <= 1e-11 * scale


def test_face_values_constant():
    grid = make_grid(0.0, 1.0, 20)
    um, up = face_values_nonuniform(np.full(20, 1.5), grid.nodes(), PERIODIC)
    np.testing.assert_allclose(um, 1.5, atol=1e-14)
    np.testing.assert_allclose(up, 1.5, atol=1e-14)
    assert um.shape == up.shape == (21,)


def test_face_values_identity_map_matches_per_cell_reconstruction():
    grid = make_grid(0.0, 2 * math.pi, 32)
    values = np.sin(grid.centers())
    um, up = face_values_nonuniform(values, grid.nodes(), PERIODIC)
    ext = np.concatenate([values[-2:], values, values[:2]])
    for j in range(32):
        poly = weno_ao_53(ext[j : j + 5], cell_index=2)
        lgrid = make_grid(-2.5, 2.5, 5)
        assert um[j + 1] == pytest.approx(poly_eval(poly, lgrid, 0.5), abs=1e-15)
        assert up[j] == pytest.approx(poly_eval(poly, lgrid, -0.5), abs=1e-15)


def test_face_values_constant_shift_high_order():
    grid = make_grid(0.0, 2 * math.pi, 128)
    shift = -0.6 * grid.dx
    tnodes = grid.nodes() + shift
    avgs = quartic_sine_averages(tnodes)
    um, up = face_values_nonuniform(avgs, tnodes, PERIODIC)
    exact = np.sin(tnodes)
    assert np.max(np.abs(um[1:-1] - exact[1:-1])) <= 50 * grid.dx**5
    assert np.max(np.abs(up[1:-1] - exact[1:-1])) <= 50 * grid.dx**5


def test_face_values_periodic_ends_match():
    rng = np.random.default_rng(2)
    grid = make_grid(0.0, 1.0, 30)
    vals = rng.normal(size=30)
    um, up = face_values_nonuniform(vals, grid.nodes(), PERIODIC)
    assert um[0] == um[-1]
    assert up[0] == up[-1]


def test_face_values_monotone_step_within_range():
    grid = make_grid(0.0, 1.0, 40)
    values = np.where(np.arange(40) < 20, 0.0, 1.0)
    um, up = face_values_nonuniform(values, grid.nodes(), PERIODIC)
    # interior faces away from the periodic wrap jump
    assert np.all(um[5:-5] >= -1e-10) and np.all(um[5:-5] <= 1 + 1e-10)
    assert np.all(up[5:-5] >= -1e-10) and np.all(up[5:-5] <= 1 + 1e-10)


def test_zero_bc_ghosts_vanish():
    grid = make_grid(0.0, 1.0, 30)
    values = np.zeros(30)
    values[10:20] = 1.0
    um, up = face_values_nonuniform(values, grid.nodes(), ZERO)
    assert um[0] == pytest.approx(0.0, abs=1e-14)
    assert up[-1] == pytest.approx(0.0, abs=1e-14)


def test_weno_rejects_bad_stencils():
    with pytest.raises(ValueError):
        weno_ao_53(np.ones(4))
    with pytest.raises(ValueError):
        weno_ao_53(np.array([1.0, 2.0, np.nan, 3.0, 4.0]))
    with pytest.raises(ValueError):
        WenoParams(gamma_hi=1.5)


def test_backends_agree():
    rng = np.random.default_rng(23)
    ext = rng.normal(size=(3, 24))
    for params in (DEFAULT_WENO, WenoParams(gamma_hi=0.9, gamma_lo=0.7, power_p=1.0)):
        c_np = _kernels_numpy.weno_ao_coeffs(
            ext, params.gamma_hi, params.gamma_lo, params.epsilon_w, params.power_p
        )
        c_nb = _kernels_numba.weno_ao_coeffs(
            ext, params.gamma_hi, params.gamma_lo, params.epsilon_w, params.power_p
        )
        np.testing.assert_allclose(c_np, c_nb, rtol=1e-13, atol=1e-13)
    coeffs = c_np[0]
    tnodes = np.sort(rng.uniform(0.5, 19.5, size=12))
    out_np = _kernels_numpy.remap_integrals(coeffs, 0.0, 1.0, tnodes)
    out_nb = _kernels_numba.remap_integrals(coeffs, 0.0, 1.0, tnodes)
    np.testing.assert_allclose(out_np, out_nb, rtol=1e-13, atol=1e-14)
    fm_np, fp_np = _kernels_numpy.face_states(coeffs)
    fm_nb, fp_nb = _kernels_numba.face_states(coeffs)
    np.testing.assert_allclose(fm_np, fm_nb, rtol=1e-14)
    np.testing.assert_allclose(fp_np, fp_nb, rtol=1e-14)
