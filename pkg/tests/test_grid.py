"""Discrete exterior calculus on periodic grids."""

from math import pi

import numpy as np
import pytest

from hsltori.grid import (GridField, GridMismatch, GridTooCoarse, QOneForm,
                          conformal_coords, ext_d, field_from_samples,
                          hodge_star, lattice_coords, max_norm, read_grid_csv,
                          wedge, write_grid_csv)
from hsltori.quaternion import q_stack
from hsltori.torus import make_lattice

SQUARE = make_lattice(0.0, 1.0)


def exponential_field(lat, n, covering=1):
    x, _ = conformal_coords(lat, n, covering)
    return field_from_samples(lat, n, np.exp(2j * pi * x), covering)


def constant_one_form(lat, n, cx, cy):
    shape = (n, n)
    fx = field_from_samples(lat, n, np.full(shape, cx, dtype=complex))
    return QOneForm(cx=fx, cy=fx.like(np.full(shape, cy, dtype=complex)))


def test_derivative_of_exponential():
    n = 128
    f = exponential_field(SQUARE, n)
    x, _ = conformal_coords(SQUARE, n)
    d = ext_d(f)
    err = np.max(np.abs(d.cx.values - 2j * pi * np.exp(2j * pi * x)))
    assert err <= 5e-3
    assert np.max(np.abs(d.cy.values)) <= 1e-12


def test_second_order_convergence():
    errs = {}
    for n in (128, 256):
        f = exponential_field(SQUARE, n)
        x, _ = conformal_coords(SQUARE, n)
        errs[n] = np.max(np.abs(ext_d(f).cx.values - 2j * pi * np.exp(2j * pi * x)))
    assert 3.6 <= errs[128] / errs[256] <= 4.4


def test_constant_field_derivative_is_zero():
    f = field_from_samples(SQUARE, 32, np.full((32, 32), 2.5 - 1j))
    d = ext_d(f)
    assert max_norm(d.cx) == 0.0 and max_norm(d.cy) == 0.0


def test_dd_vanishes_square_lattice():
    rng = np.random.default_rng(0)
    f = field_from_samples(SQUARE, 64, rng.uniform(-1, 1, (64, 64)))
    assert np.max(np.abs(ext_d(ext_d(f)).c.values)) == 0.0
    fq = field_from_samples(SQUARE, 32,
                            rng.uniform(-1, 1, (32, 32, 2)) + 1j * rng.uniform(-1, 1, (32, 32, 2)))
    assert max_norm(ext_d(ext_d(fq))) == 0.0


def test_dd_vanishes_skew_lattice_to_roundoff():
    # The Jacobian combination reassociates sums, so only exact arithmetic
    # gives literal zero here; the residue is pure rounding noise.
    lat = make_lattice(0.5, 1.25)
    rng = np.random.default_rng(1)
    f = field_from_samples(lat, 64, rng.uniform(-1, 1, (64, 64)))
    assert np.max(np.abs(ext_d(ext_d(f)).c.values)) <= 1e-11


def test_grid_too_coarse():
    f = field_from_samples(SQUARE, 2, np.zeros((2, 2)))
    with pytest.raises(GridTooCoarse):
        ext_d(f)


def test_hodge_star_convention():
    dx = constant_one_form(SQUARE, 16, 1.0, 0.0)
    star_dx = hodge_star(dx)
    assert star_dx.cx.values[0, 0] == 0.0
    assert star_dx.cy.values[0, 0] == -1.0
    dy = constant_one_form(SQUARE, 16, 0.0, 1.0)
    star_star_dy = hodge_star(hodge_star(dy))
    assert star_star_dy.cx.values[0, 0] == 0.0
    assert star_star_dy.cy.values[0, 0] == -1.0


def test_hodge_star_of_angle_differential():
    # d beta = 2*pi dx for (r, s) = (1, 0) on the square torus
    dbeta = constant_one_form(SQUARE, 16, 2 * pi, 0.0)
    star = hodge_star(dbeta)
    assert np.all(star.cx.values == 0.0)
    assert np.all(star.cy.values == -2 * pi)


def test_star_is_componentwise_isometry():
    rng = np.random.default_rng(2)
    fx = field_from_samples(SQUARE, 16, rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)))
    omega = QOneForm(cx=fx, cy=fx.like(rng.normal(size=(16, 16)) + 0j))
    assert max_norm(hodge_star(omega)) == max_norm(omega)


def test_wedge_basis():
    dx = constant_one_form(SQUARE, 16, 1.0, 0.0)
    dy = constant_one_form(SQUARE, 16, 0.0, 1.0)
    assert np.all(wedge(dx, dy).c.values == 1.0)


def test_wedge_noncommutative_quaternion():
    n = 8
    i_arr = np.full((n, n), 1j)
    zero = np.zeros((n, n), dtype=complex)
    one = np.ones((n, n), dtype=complex)
    cx = field_from_samples(SQUARE, n, q_stack(i_arr, zero))       # i dx
    cy = cx.like(q_stack(zero, one))                               # j dy
    omega = QOneForm(cx=cx, cy=cy)
    sq = wedge(omega, omega)
    # i*j - j*i = 2k, whose left pair is (0, 2i)
    assert np.all(sq.c.values[..., 0] == 0.0)
    assert np.all(sq.c.values[..., 1] == 2j)


def test_wedge_commutative_for_real_forms():
    rng = np.random.default_rng(3)
    a = constant_one_form(SQUARE, 8, rng.normal(), rng.normal())
    b = constant_one_form(SQUARE, 8, rng.normal(), rng.normal())
    total = wedge(a, b).c.values + wedge(b, a).c.values
    assert np.max(np.abs(total)) == 0.0


def test_wedge_grid_mismatch():
    a = constant_one_form(SQUARE, 8, 1.0, 0.0)
    b = constant_one_form(SQUARE, 16, 1.0, 0.0)
    with pytest.raises(GridMismatch):
        wedge(a, b)


def test_max_norm_examples():
    zero = field_from_samples(SQUARE, 8, np.zeros((8, 8)))
    assert max_norm(zero) == 0.0
    assert max_norm(exponential_field(SQUARE, 32)) == pytest.approx(1.0, abs=1e-14)
    dbeta = constant_one_form(SQUARE, 8, 2 * pi, 0.0)
    assert max_norm(dbeta.cx) == pytest.approx(2 * pi)


def test_csv_roundtrip_and_determinism(tmp_path):
    rng = np.random.default_rng(4)
    values = rng.normal(size=(8, 8, 2)) + 1j * rng.normal(size=(8, 8, 2))
    f = field_from_samples(SQUARE, 8, values)
    path = tmp_path / "field.csv"
    write_grid_csv(f, path)
    back = read_grid_csv(path)
    assert np.array_equal(back, values)
    first = path.read_bytes()
    write_grid_csv(f, path)
    assert path.read_bytes() == first


def test_doubled_grid_spacing():
    f = field_from_samples(SQUARE, 16, np.zeros((32, 32)), covering=2)
    assert f.samples == 32
    assert f.spacing == 1.0 / 16.0
