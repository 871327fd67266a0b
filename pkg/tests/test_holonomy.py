"""Holonomy matrices, closed-form traces, and the spectral scan."""

from math import log, pi

import numpy as np
import pytest
import scipy.linalg

from hsltori.family import FamilyPoint, ZeroEta, family_matrix_form
from hsltori.holonomy import (expm_traceless, holonomy_matrices, spectral_scan,
                              trace_closed_form, write_scan_csv,
                              zeros_json_payload)
from hsltori.serialize import write_json
from hsltori.torus import make_angle_map, make_lattice

SQUARE = make_lattice(0.0, 1.0)
AM10 = make_angle_map(SQUARE, 1, 0)


# -- matrix exponential -------------------------------------------------------

def test_expm_diagonal_case():
    out = expm_traceless(1j * pi / 2, 0.0)
    assert np.allclose(out, np.diag([1j, -1j]), atol=1e-14)


def test_expm_offdiagonal_case():
    out = expm_traceless(0.0, log(2.0))
    assert np.allclose(out, np.array([[1.25, 0.75], [0.75, 1.25]]), atol=1e-14)


def test_expm_zero_matrix():
    assert np.array_equal(expm_traceless(0.0, 0.0), np.eye(2))


def test_expm_matches_scipy_including_series_regime():
    rng = np.random.default_rng(0)
    for scale in (1.0, 1e-5, 1e-9):
        for _ in range(20):
            a = scale * complex(rng.normal(), rng.normal())
            b = scale * complex(rng.normal(), rng.normal())
            mine = expm_traceless(a, b)
            ref = scipy.linalg.expm(np.array([[a, b], [b, -a]]))
            assert np.max(np.abs(mine - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_expm_branch_independence():
    # cosh and sinh(t)/t are even, so the two square roots agree
    a, b = 0.3 + 1.1j, -0.8 + 0.2j
    out = expm_traceless(a, b)
    ref = scipy.linalg.expm(np.array([[a, b], [b, -a]]))
    assert np.allclose(out, ref, atol=1e-13)


# -- holonomy -----------------------------------------------------------------

def test_holonomy_identity_at_eta_i():
    gc = family_matrix_form(AM10, FamilyPoint(1j))
    pair = holonomy_matrices(gc)
    assert np.allclose(pair.g0_matrix, np.eye(2), atol=1e-12)


def test_holonomy_trace_at_eta_one():
    gc = family_matrix_form(AM10, FamilyPoint(1.0 + 0j))
    pair = holonomy_matrices(gc)
    assert np.trace(pair.g0_matrix) == pytest.approx(-2.0, abs=1e-12)


def test_holonomy_determinants_are_one():
    rng = np.random.default_rng(1)
    for _ in range(20):
        eta = np.exp(1j * rng.uniform(0, 2 * pi))
        gc = family_matrix_form(AM10, FamilyPoint(complex(eta)))
        pair = holonomy_matrices(gc)
        assert abs(np.linalg.det(pair.g0_matrix) - 1.0) <= 1e-12
        assert abs(np.linalg.det(pair.g1_matrix) - 1.0) <= 1e-12


def test_trace_oracle_agreement():
    rng = np.random.default_rng(2)
    for _ in range(5):
        r = int(rng.integers(-4, 5)) or 1
        s = int(rng.integers(-4, 5))
        lat = make_lattice(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0))
        am = make_angle_map(lat, r, s)
        for _ in range(100):
            eta = complex(np.exp(1j * rng.uniform(0, 2 * pi)))
            gc = family_matrix_form(am, FamilyPoint(eta))
            pair = holonomy_matrices(gc)
            sample = trace_closed_form(am, eta)
            assert abs(np.trace(pair.g0_matrix) - sample.g0) <= 1e-10
            assert abs(np.trace(pair.g1_matrix) - sample.g1) <= 1e-10


# -- closed-form traces ----------------------------------------------------------

def test_trace_values_square_torus():
    s1 = trace_closed_form(AM10, 1.0)
    assert s1.g0 == pytest.approx(-2.0, abs=1e-13)
    assert s1.g1 == pytest.approx(2.0, abs=1e-13)
    si = trace_closed_form(AM10, 1j)
    assert si.g0 == pytest.approx(2.0, abs=1e-13)
    assert si.g1 == pytest.approx(-2.0, abs=1e-13)


def test_trace_even_in_eta():
    eta = np.exp(1j * pi / 4)
    plus = trace_closed_form(AM10, complex(eta))
    minus = trace_closed_form(AM10, complex(-eta))
    assert abs(plus.g0 - minus.g0) <= 1e-12
    assert abs(plus.g1 - minus.g1) <= 1e-12


def test_trace_zero_eta_rejected():
    with pytest.raises(ZeroEta):
        trace_closed_form(AM10, 0.0)


# -- spectral scan ----------------------------------------------------------------

def test_scan_r1_zero_locations():
    scan = spectral_scan(AM10, 1024)
    assert len(scan.zeros) == 4
    expected = [0.0, pi / 2, pi, 3 * pi / 2]
    for z, phi in zip(scan.zeros, expected):
        assert min(abs(z.phi - phi), 2 * pi - abs(z.phi - phi)) <= 1e-3
        assert z.d1_abs <= 1e-6 * scan.scale


def test_scan_r2_zero_count():
    am = make_angle_map(SQUARE, 2, 0)
    scan = spectral_scan(am, 1024)
    assert len(scan.zeros) == 8


def test_scan_generic_map_zeros_are_order_two():
    # |r delta - s| / delta1 is irrational here, so the circle meets no
    # tangency point and every zero is exactly double: d1 ~ 0, d2 > 0
    am = make_angle_map(SQUARE, 2, 1)
    scan = spectral_scan(am, 1024)
    assert len(scan.zeros) > 0
    for z in scan.zeros:
        assert z.d1_abs <= 1e-6 * scan.scale
        assert z.d2_abs >= 0.1 * scan.scale
        assert z.d1_abs / z.d2_abs <= 1e-7


def test_scan_degenerate_points_have_vanishing_second_derivative():
    # For (r, s) = (1, 0) on the square torus the zeros at eta = +/-1 are
    # tangency points: the discriminant vanishes to fourth order there.
    scan = spectral_scan(AM10, 1024)
    flat = [z for z in scan.zeros if min(z.phi, abs(z.phi - pi), 2 * pi - z.phi) <= 1e-3]
    steep = [z for z in scan.zeros if z not in flat]
    assert len(flat) == 2 and len(steep) == 2
    for z in flat:
        assert z.d2_abs <= 1e-5
    for z in steep:
        assert z.d2_abs == pytest.approx(8 * pi ** 2, rel=1e-4)


def test_scan_sample_floor():
    with pytest.raises(ValueError):
        spectral_scan(AM10, 8)


def test_scan_writers_deterministic(tmp_path):
    scan = spectral_scan(AM10, 64)
    csv_path = tmp_path / "scan.csv"
    json_path = tmp_path / "zeros.json"
    write_scan_csv(scan, csv_path)
    write_json({"zeros": zeros_json_payload(scan)}, json_path)
    first = (csv_path.read_bytes(), json_path.read_bytes())
    write_scan_csv(scan, csv_path)
    write_json({"zeros": zeros_json_payload(scan)}, json_path)
    assert (csv_path.read_bytes(), json_path.read_bytes()) == first
    header = csv_path.read_text().splitlines()[0]
    assert header == "phi,eta_re,eta_im,g0_re,g0_im,g1_re,g1_im,disc0_abs,disc1_abs"
