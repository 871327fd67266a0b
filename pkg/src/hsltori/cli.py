"""Command-line front end: enumerate | construct | verify | scan | export.

Every command is a thin composition of library calls.  Identical inputs
produce byte-identical outputs: floats are written with 17 significant
digits, orderings are fixed, and figures carry fixed metadata.  The report
paths (verify and scan) render figures next to the delimited output unless
--no-figures is given.

Exit codes: 0 success, 1 numerical verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import classify, holonomy, mesh
from .family import FamilyPoint
from .grid import max_norm, read_grid_csv, write_grid_csv
from .quaternion import q_norm
from .serialize import complex_pair, dumps_json, write_json
from .surface import (SurfaceGrid, fundamental_form, homogeneous_torus,
                      lagrangian_angle, lagrangian_residual, right_normal,
                      sphere_residual, surface_from_values)
from .torus import (NonPositiveDelta1, make_angle_map, make_lattice,
                    make_lattice_exact)

VALID_GRIDS = tuple(2 ** k for k in range(4, 13))  # powers of two in [16, 4096]


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def _try_fraction(text):
    if text is None:
        return None
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        return None


def build_lattice(args):
    """Lattice from --delta0 and exactly one of --delta1 / --delta1sq.

    Rational inputs ("p/q" or decimal strings) give an exact lattice; other
    floats fall back to inexact arithmetic and are flagged in outputs.
    """
    if args.delta1 is None and args.delta1sq is None:
        raise UsageError("one of --delta1 or --delta1sq is required")
    if args.delta1 is not None and args.delta1sq is not None:
        raise UsageError("--delta1 and --delta1sq are mutually exclusive")
    d0_frac = _try_fraction(args.delta0)
    if args.delta1sq is not None:
        d1sq_frac = _try_fraction(args.delta1sq)
        if d0_frac is not None and d1sq_frac is not None:
            return make_lattice_exact(d0_frac, d1sq_frac)
        return make_lattice(float(Fraction(args.delta0)) if d0_frac else float(args.delta0),
                            float(np.sqrt(float(args.delta1sq))))
    d1_frac = _try_fraction(args.delta1)
    if d0_frac is not None and d1_frac is not None:
        if not d1_frac > 0:
            raise NonPositiveDelta1(f"delta1 must be positive, got {d1_frac}")
        return make_lattice_exact(d0_frac, d1_frac * d1_frac)
    return make_lattice(float(args.delta0), float(args.delta1))


def build_angle_map(args):
    if args.r is None or args.s is None:
        raise UsageError("--r and --s are required")
    return make_angle_map(build_lattice(args), args.r, args.s)


def check_grid(n: int) -> int:
    if n not in VALID_GRIDS:
        raise UsageError(f"--grid must be a power of two in [16, 4096], got {n}")
    return n


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _sidecar(out, suffix: str):
    if out is None:
        return None
    p = Path(out)
    return p.with_name(p.stem + suffix)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    am = build_angle_map(args)
    quads = classify.enumerate_solutions(am, args.bound)
    payload = {
        "r": am.r, "s": am.s,
        "delta0": am.lattice.delta0, "delta1": am.lattice.delta1,
        "exact": am.lattice.is_exact,
        "bound": args.bound,
        "in_moduli_closure": am.lattice.in_moduli_closure,
        "count": len(quads),
        "non_excluded": sum(1 for q in quads if not q.excluded),
        "quads": [classify.quad_payload(q) for q in quads],
    }
    _emit(dumps_json(payload), args.out)
    return 0


def _build_quad_surface(args):
    am = build_angle_map(args)
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required for a constructed section")
    quads = {(q.m, q.n): q for q in
             classify.enumerate_solutions(am, max(abs(args.m), abs(args.n), 1))}
    quad = quads.get((args.m, args.n))
    if quad is None:
        raise UsageError(f"(m, n) = ({args.m}, {args.n}) does not satisfy the "
                         "classification constraint for this angle map")
    torus = classify.construct_parallel_section(
        quad, parse_complex(args.f00), parse_complex(args.f30), check_grid(args.grid))
    return torus


def _build_surface(args):
    """Surface from --homogeneous, from quad parameters, or from --in CSV."""
    if args.infile is not None:
        if args.delta1 is None and args.delta1sq is None:
            raise UsageError("an external surface needs --delta1 or --delta1sq")
        lattice = build_lattice(args)
        values = read_grid_csv(args.infile)
        samples = values.shape[0]
        if samples % args.covering != 0:
            raise UsageError("CSV grid size is not divisible by --covering")
        return surface_from_values(lattice, samples // args.covering, values,
                                   args.covering), None
    if args.homogeneous:
        if args.delta1 is None and args.delta1sq is None:
            raise UsageError("--homogeneous needs --delta1 or --delta1sq")
        lattice = build_lattice(args)
        return homogeneous_torus(lattice, args.scale, check_grid(args.grid)), None
    torus = _build_quad_surface(args)
    return torus.surface, torus


def cmd_construct(args) -> int:
    surface, _ = _build_surface(args)
    if args.format not in (None, "csv"):
        raise UsageError("construct emits CSV")
    if args.out is None:
        raise UsageError("construct requires --out")
    write_grid_csv(surface.psi, args.out)
    return 0


def _generic_surface_report(surface: SurfaceGrid, fd_factor: float) -> dict:
    n = surface.n
    inv_sq = 1.0 / (n * n)
    sph = sphere_residual(surface)
    from .surface import connection_form
    form = connection_form(surface)
    omega_scale = max(1.0, max_norm(form.omega))
    fx, fy = surface.partials()
    theta_scale = max(1.0, float(np.max(q_norm(fx.values)))
                      * float(np.max(q_norm(fy.values))))
    lag = lagrangian_residual(surface)
    normal = right_normal(surface)
    ff = fundamental_form(surface)
    e_vals, f_vals, g_vals = ff.E.values, ff.F.values, ff.G.values
    e_level = max(float(np.median(e_vals)), 1e-300)
    ff_tol = fd_factor * inv_sq * max(1.0, 4.0 * e_level)

    checks = {
        "sphere_max_re_omega": {"value": sph.max_re_omega,
                                "tol": fd_factor * inv_sq * omega_scale},
        "norm_spread": {"value": sph.norm_spread,
                        "tol": fd_factor * inv_sq *
                               max(1.0, float(np.max(q_norm(surface.psi.values))))},
        "lagrangian_max": {"value": lag, "tol": fd_factor * inv_sq * theta_scale},
        "normal_sq_residual": {"value": normal.max_sq_residual,
                               "tol": fd_factor * inv_sq * 10.0},
        "conformal_gap": {"value": float(np.max(np.abs(e_vals - g_vals))), "tol": ff_tol},
        "shear": {"value": float(np.max(np.abs(f_vals))), "tol": ff_tol},
        "homogeneous_spread": {"value": float(np.max(e_vals) - np.min(e_vals)),
                               "tol": ff_tol},
    }
    for item in checks.values():
        item["pass"] = item["value"] <= item["tol"]
    try:
        fit = lagrangian_angle(normal.field)
        angle = {"r": fit.r, "s": fit.s, "beta0": fit.beta0,
                 "residual": fit.residual, "constant": fit.constant}
    except Exception as exc:  # NotLagrangian
        angle = {"error": str(exc)}
    return {
        "grid": n, "covering": surface.covering,
        "flatness_residual": form.flatness_residual,
        "checks": checks,
        "angle_fit": angle,
        "pass": all(item["pass"] for item in checks.values()),
    }


def cmd_verify(args) -> int:
    surface, torus = _build_surface(args)
    fd_factor = 50.0  # "paper" profile
    if torus is not None:
        report = classify.verify_torus(torus, fd_factor=fd_factor)
        payload = classify.quad_payload(torus.quad, report)
        ok = report.passed
    else:
        payload = _generic_surface_report(surface, fd_factor)
        ok = payload["pass"]
    _emit(dumps_json(payload), args.out)
    if args.out is not None and args.figures:
        from .report import render_surface_figure
        render_surface_figure(surface, _sidecar(args.out, ".png"),
                              title="verification residuals")
    return 0 if ok else 1


def cmd_scan(args) -> int:
    am = build_angle_map(args)
    if args.eta is not None:
        eta = parse_complex(args.eta)
        sample = holonomy.trace_closed_form(am, eta)
        payload = {
            "eta": complex_pair(sample.eta),
            "g0": complex_pair(sample.g0),
            "g1": complex_pair(sample.g1),
            "disc0_abs": abs(sample.disc0),
            "disc1_abs": abs(sample.disc1),
        }
        _emit(dumps_json(payload), args.out)
        return 0
    scan = holonomy.spectral_scan(am, samples=args.samples)
    if args.out is None:
        _emit(dumps_json({"zeros": holonomy.zeros_json_payload(scan),
                          "scale": scan.scale}), None)
        return 0
    holonomy.write_scan_csv(scan, args.out)
    write_json({"zeros": holonomy.zeros_json_payload(scan), "scale": scan.scale},
               _sidecar(args.out, "_zeros.json"))
    if args.figures:
        from .report import render_scan_figure
        render_scan_figure(scan, _sidecar(args.out, ".png"))
    return 0


def cmd_export(args) -> int:
    surface, _ = _build_surface(args)
    result = mesh.project_surface(surface, pole=args.pole)
    if args.out is None:
        raise UsageError("export requires --out")
    mesh.write_obj(result, args.out)
    if result.clamped or result.degenerate_faces:
        sys.stderr.write(f"warning: {result.clamped} clamped vertices, "
                         f"{result.degenerate_faces} degenerate faces\n")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsltori",
        description="Construct and verify Hamiltonian stationary Lagrangian "
                    "tori contained in a hypersphere of C^2.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--delta0", default="0",
                       help="lattice real part; rational 'p/q' or float")
        p.add_argument("--delta1", default=None, help="lattice imaginary part")
        p.add_argument("--delta1sq", default=None,
                       help="square of the imaginary part, kept exact when rational")
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--s", type=int, default=None)
        p.add_argument("--out", default=None, help="output file (stdout for reports)")
        p.add_argument("--format", choices=("csv", "json", "obj"), default=None)
        p.add_argument("--tol-profile", choices=("paper",), default="paper")

    def add_surface_source(p):
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--f00", default="1")
        p.add_argument("--f30", default="0")
        p.add_argument("--grid", type=int, default=256)
        p.add_argument("--homogeneous", action="store_true",
                       help="build the product torus instead of a classified section")
        p.add_argument("--scale", type=float, default=1.0)
        p.add_argument("--in", dest="infile", default=None,
                       help="read the surface from a grid CSV")
        p.add_argument("--covering", type=int, choices=(1, 2), default=1,
                       help="periodicity covering of an external CSV")

    p = sub.add_parser("enumerate", help="integer solutions of the constraint")
    add_common(p)
    p.add_argument("--bound", type=int, default=6)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", help="sample a surface to grid CSV")
    add_common(p)
    add_surface_source(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="residual verification report (JSON)")
    add_common(p)
    add_surface_source(p)
    p.add_argument("--no-figures", dest="figures", action="store_false")
    p.set_defaults(func=cmd_verify, figures=True)

    p = sub.add_parser("scan", help="spectral scan of the unit circle")
    add_common(p)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--eta", default=None,
                   help="evaluate the closed-form traces at a single point 'a+bi'")
    p.add_argument("--no-figures", dest="figures", action="store_false")
    p.set_defaults(func=cmd_scan, figures=True)

    p = sub.add_parser("export", help="stereographic OBJ mesh")
    add_common(p)
    add_surface_source(p)
    p.add_argument("--pole", choices=sorted(mesh.POLES), default="w+")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except mesh.NotSpherical as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return 1
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
