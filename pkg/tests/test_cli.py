"""End-to-end CLI behavior: commands, formats, exit codes, determinism."""

import json

import numpy as np
import pytest

from hsltori.cli import main, parse_complex
from hsltori.grid import lattice_coords, write_grid_csv
from hsltori.surface import homogeneous_torus
from hsltori.torus import make_lattice


def run(*args):
    return main(list(args))


def test_parse_complex():
    assert parse_complex("0.6+0.8i") == 0.6 + 0.8j
    assert parse_complex("1") == 1.0 + 0j
    assert parse_complex("-i") == -1j
    with pytest.raises(Exception):
        parse_complex("zebra")


def test_enumerate_to_file(tmp_path):
    out = tmp_path / "quads.json"
    assert run("enumerate", "--delta0", "0", "--delta1sq", "1",
               "--r", "1", "--s", "0", "--bound", "6", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["non_excluded"] == 2
    assert doc["exact"] is True
    etas = sorted(q["eta"][1] for q in doc["quads"] if not q["excluded"])
    assert etas == [-1.0, 1.0]


def test_construct_and_verify_clifford(tmp_path):
    csv = tmp_path / "clifford.csv"
    assert run("construct", "--homogeneous", "--delta1", "1", "--scale", "1",
               "--grid", "64", "--out", str(csv)) == 0
    assert csv.read_text().splitlines()[0] == "ix,iy,w,x,y,z"
    report = tmp_path / "verify.json"
    assert run("verify", "--homogeneous", "--delta1", "1", "--scale", "1",
               "--grid", "64", "--out", str(report)) == 0
    doc = json.loads(report.read_text())
    assert doc["pass"] is True
    assert doc["checks"]["sphere_max_re_omega"]["pass"] is True
    assert doc["angle_fit"]["r"] == 1 and doc["angle_fit"]["s"] == 1
    assert (tmp_path / "verify.png").exists()


def test_verify_external_csv_roundtrip(tmp_path):
    csv = tmp_path / "surface.csv"
    surf = homogeneous_torus(make_lattice(0.0, 2.0), 1.5, 32)
    write_grid_csv(surf.psi, csv)
    report = tmp_path / "external.json"
    assert run("verify", "--in", str(csv), "--delta1", "2",
               "--out", str(report), "--no-figures") == 0
    doc = json.loads(report.read_text())
    assert doc["pass"] is True
    assert not (tmp_path / "external.png").exists()


def test_verify_quad_section(tmp_path):
    report = tmp_path / "quad.json"
    assert run("verify", "--delta0", "0", "--delta1sq", "1", "--r", "1", "--s", "0",
               "--m", "0", "--n", "1", "--grid", "64", "--out", str(report)) == 0
    doc = json.loads(report.read_text())
    assert doc["pass"] is True
    assert doc["eta"] == [0.0, 1.0]
    assert doc["residuals"]["lattice_periodic"] is False


def test_verify_corrupted_surface_exits_one(tmp_path):
    surf = homogeneous_torus(make_lattice(0.0, 1.0), 1.0, 64)
    vals = surf.psi.values.copy()
    xl, _ = lattice_coords(surf.lattice, 64)
    vals[..., 1] += 0.1 * np.exp(-2j * np.pi * xl)
    csv = tmp_path / "corrupt.csv"
    write_grid_csv(surf.psi.like(vals), csv)
    assert run("verify", "--in", str(csv), "--delta1", "1",
               "--out", str(tmp_path / "corrupt.json"), "--no-figures") == 1


def test_scan_outputs_and_zero_report(tmp_path):
    out = tmp_path / "scan.csv"
    assert run("scan", "--delta0", "0", "--delta1", "1", "--r", "1", "--s", "0",
               "--samples", "1024", "--out", str(out)) == 0
    zeros = json.loads((tmp_path / "scan_zeros.json").read_text())["zeros"]
    assert len(zeros) == 4
    assert (tmp_path / "scan.png").exists()
    assert out.read_text().splitlines()[0].startswith("phi,eta_re")


def test_scan_single_eta(capsys):
    assert run("scan", "--delta0", "0", "--delta1", "1", "--r", "1", "--s", "0",
               "--eta", "1i") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["g0"] == [2.0, 0.0]
    assert doc["g1"] == [-2.0, -0.0] or doc["g1"] == [-2.0, 0.0]


def test_export_obj(tmp_path):
    out = tmp_path / "torus.obj"
    assert run("export", "--delta0", "0", "--delta1sq", "1", "--r", "1", "--s", "0",
               "--m", "0", "--n", "1", "--grid", "16", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "v -1 -1 1"


def test_export_translated_fails(tmp_path):
    surf = homogeneous_torus(make_lattice(0.0, 1.0), 1.0, 32)
    vals = surf.psi.values.copy()
    vals[..., 0] += 2.0
    csv = tmp_path / "translated.csv"
    write_grid_csv(surf.psi.like(vals), csv)
    assert run("export", "--in", str(csv), "--delta1", "1",
               "--out", str(tmp_path / "bad.obj")) == 1


def test_usage_errors_exit_two(tmp_path):
    assert run("verify", "--delta1", "1") == 2                      # missing r/s
    assert run("enumerate", "--r", "1", "--s", "0") == 2            # missing delta1
    assert run("construct", "--homogeneous", "--delta1", "1",
               "--grid", "100", "--out", str(tmp_path / "x.csv")) == 2  # bad grid
    assert run("verify", "--delta0", "0", "--delta1sq", "1", "--r", "1", "--s", "0",
               "--m", "1", "--n", "1", "--grid", "64",
               "--out", str(tmp_path / "y.json")) == 2              # not a solution


def test_repeated_runs_are_byte_identical(tmp_path):
    args_sets = [
        ("enumerate", "--delta0", "0", "--delta1sq", "1", "--r", "3", "--s", "4",
         "--bound", "10", "--out", str(tmp_path / "quads.json")),
        ("scan", "--delta0", "0", "--delta1", "1", "--r", "2", "--s", "1",
         "--samples", "256", "--out", str(tmp_path / "scan.csv")),
        ("verify", "--delta0", "0", "--delta1sq", "1", "--r", "1", "--s", "0",
         "--m", "0", "--n", "1", "--grid", "32", "--out", str(tmp_path / "v.json")),
    ]
    outputs = [tmp_path / "quads.json", tmp_path / "scan.csv",
               tmp_path / "scan_zeros.json", tmp_path / "scan.png",
               tmp_path / "v.json", tmp_path / "v.png"]
    for args in args_sets:
        assert run(*args) == 0
    first = {p: p.read_bytes() for p in outputs}
    for args in args_sets:
        assert run(*args) == 0
    for p in outputs:
        assert p.read_bytes() == first[p], f"{p.name} differs between runs"
