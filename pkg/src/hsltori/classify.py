"""Integer classification of doubly periodic parallel sections.

A pair of integers (m, n) labels a family member with a doubly periodic
parallel section exactly when

    (m^2 - r^2) delta0^2 - 2 (m n - r s) delta0 + (m^2 - r^2) delta1^2
        + n^2 - s^2 = 0,

in which case the member sits at the unit-circle point

    eta = (m delta1 - (m delta0 - n) i) / (r delta1 - (r delta0 - s) i).

The constraint is solved in exact rational arithmetic when the lattice
carries exact data (for each m it is a monic quadratic in n, so integer
roots are found through an exact square root).  The section itself is the
closed form

    psi = (F00 - eta F30 i j) [ (1 - eta) e^{i (P + beta/2)}
                                + (1 + eta) i e^{i (P - beta/2)} j ]

with P = pi (m xl + n yl) in lattice coordinates; it is periodic on the
doubled lattice and is verified to be a homogeneous torus by residual tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, pi
from typing import Optional

import numpy as np

from .family import (FamilyPoint, family_matrix_form, frame_convert,
                     dirac_apply, parallel_residual)
from .grid import GridField, QOneForm, field_from_samples, lattice_coords
from .holonomy import trace_closed_form
from .quaternion import q_norm, q_stack
from .serialize import complex_pair
from .surface import (SurfaceGrid, fundamental_form, lagrangian_residual,
                      sphere_residual)
from .torus import AngleMap, TorusLattice


class TrivialEta(ValueError):
    """The quad is excluded: its family member is the trivial connection."""


class ZeroConstants(ValueError):
    """At least one of the section constants must be nonzero."""


#: sign patterns relative to (r, s) that are excluded from the construction
EXCLUDED_SIGNS = ((1, 1), (-1, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class SolutionQuad:
    m: int
    n: int
    angle: AngleMap
    eta: complex
    excluded: bool
    exact: bool      # constraint checked in exact rational arithmetic

    @property
    def lattice(self) -> TorusLattice:
        return self.angle.lattice


@dataclass(frozen=True, eq=False)
class ConstructedTorus:
    quad: SolutionQuad
    f00: complex
    f30: complex
    surface: SurfaceGrid
    lam0: GridField
    lam1: GridField
    remark_coeff_gap: float   # |real coefficient printed in the source remark - eta|


def constraint_fraction(m: int, n: int, r: int, s: int,
                        delta0: Fraction, delta1_sq: Fraction) -> Fraction:
    return ((m * m - r * r) * delta0 * delta0
            - 2 * (m * n - r * s) * delta0
            + (m * m - r * r) * delta1_sq
            + n * n - s * s)


def constraint_float(m: int, n: int, r: int, s: int,
                     delta0: float, delta1_sq: float) -> float:
    return ((m * m - r * r) * delta0 * delta0
            - 2.0 * (m * n - r * s) * delta0
            + (m * m - r * r) * delta1_sq
            + n * n - s * s)


def eta_formula(m: int, n: int, am: AngleMap) -> complex:
    lat = am.lattice
    num = complex(m * lat.delta1, -(m * lat.delta0 - n))
    den = complex(am.r * lat.delta1, -(am.r * lat.delta0 - am.s))
    return num / den


def eta_formula_alternate(m: int, n: int, am: AngleMap) -> complex:
    lat = am.lattice
    num = complex(am.r * lat.delta1, am.r * lat.delta0 - am.s)
    den = complex(m * lat.delta1, m * lat.delta0 - n)
    return num / den


def _is_excluded(m: int, n: int, r: int, s: int) -> bool:
    return any(m == sr * r and n == ss * s for sr, ss in EXCLUDED_SIGNS)


def _fraction_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative fraction, or None if irrational."""
    if value < 0:
        return None
    p, q = value.numerator, value.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp != p or rq * rq != q:
        return None
    return Fraction(rp, rq)


def _quad_from_pair(m: int, n: int, am: AngleMap, exact: bool) -> SolutionQuad:
    return SolutionQuad(m=m, n=n, angle=am, eta=eta_formula(m, n, am),
                        excluded=_is_excluded(m, n, am.r, am.s), exact=exact)


def enumerate_solutions(am: AngleMap, bound: int,
                        float_tol: float = 1e-9) -> list[SolutionQuad]:
    """All constraint solutions with |m|, |n| <= bound, sorted by (m, n).

    For each m the constraint is the monic quadratic
    n^2 - 2 m delta0 n + [(m^2 - r^2)(delta0^2 + delta1^2) + 2 r s delta0 - s^2] = 0,
    solved exactly when the lattice carries rational data; otherwise a
    floating root search with tolerance ``float_tol`` is used and the quads
    are flagged inexact.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    lat = am.lattice
    r, s = am.r, am.s
    quads: list[SolutionQuad] = []
    if lat.is_exact:
        d0, d1sq = lat.delta0_exact, lat.delta1_sq_exact
        norm_sq = d0 * d0 + d1sq
        for m in range(-bound, bound + 1):
            disc = m * m * d0 * d0 - ((m * m - r * r) * norm_sq + 2 * r * s * d0 - s * s)
            root = _fraction_sqrt(disc)
            if root is None:
                continue
            for branch in ({m * d0 + root, m * d0 - root}):
                if branch.denominator != 1:
                    continue
                n = int(branch)
                if abs(n) <= bound and constraint_fraction(m, n, r, s, d0, d1sq) == 0:
                    quads.append(_quad_from_pair(m, n, am, exact=True))
    else:
        d0, d1sq = lat.delta0, lat.delta1 ** 2
        scale = 1.0 + r * r + s * s + bound * bound * (1.0 + d0 * d0 + d1sq)
        for m in range(-bound, bound + 1):
            disc = m * m * d0 * d0 - ((m * m - r * r) * (d0 * d0 + d1sq)
                                      + 2.0 * r * s * d0 - s * s)
            if disc < -float_tol * scale:
                continue
            root = np.sqrt(max(disc, 0.0))
            for n_real in (m * d0 + root, m * d0 - root):
                n = int(round(n_real))
                if abs(n) > bound:
                    continue
                if abs(constraint_float(m, n, r, s, d0, d1sq)) <= float_tol * scale:
                    if not any(q.m == m and q.n == n for q in quads):
                        quads.append(_quad_from_pair(m, n, am, exact=False))
    quads.sort(key=lambda q: (q.m, q.n))
    return quads


def eta_of_solution(quad: SolutionQuad) -> complex:
    """Unit-circle parameter of a non-excluded quad.

    Raises ``TrivialEta`` for excluded quads, whose member is gauge-trivial.
    """
    if quad.excluded:
        raise TrivialEta(f"(m, n) = ({quad.m}, {quad.n}) is excluded for "
                         f"(r, s) = ({quad.angle.r}, {quad.angle.s})")
    return quad.eta


def periodicity_gaps(quad: SolutionQuad) -> tuple[float, float]:
    """|Re(beta_z conj(eta)) - m pi| and |Re(beta_z conj(eta) delta) - n pi|."""
    am = quad.angle
    eta_bar = np.conj(quad.eta)
    gap0 = abs((am.beta_z * eta_bar).real - quad.m * pi)
    gap1 = abs((am.beta_z * eta_bar * complex(am.lattice.delta0,
                                              am.lattice.delta1)).real - quad.n * pi)
    return float(gap0), float(gap1)


def _phase_grids(quad: SolutionQuad, n: int):
    am = quad.angle
    xl, yl = lattice_coords(am.lattice, n, covering=2)
    p = pi * (quad.m * xl + quad.n * yl)           # Re(beta_z conj(eta) z)
    half_beta = pi * (am.r * xl + am.s * yl)       # beta / 2
    return xl, yl, p, half_beta


def construct_parallel_section(quad: SolutionQuad, f00: complex, f30: complex,
                               n: int) -> ConstructedTorus:
    """Sample the closed-form parallel section on the doubled grid.

    The exact differential is attached to the surface so that the constancy
    of the fundamental form can be certified at roundoff level.
    """
    if quad.excluded:
        raise TrivialEta("cannot construct a section for an excluded quad")
    f00, f30 = complex(f00), complex(f30)
    if f00 == 0 and f30 == 0:
        raise ZeroConstants("F00 and F30 cannot both vanish")
    am = quad.angle
    lat = am.lattice
    eta = quad.eta
    xl, yl, p, half_beta = _phase_grids(quad, n)

    e_plus = np.exp(1j * (p + half_beta))    # oscillation pi[(m+r) xl + (n+s) yl]
    e_minus = np.exp(1j * (p - half_beta))
    psi0 = f00 * (1.0 - eta) * e_plus + f30 * (1.0 + eta) * np.conj(e_minus)
    psi1 = (f00 * (1.0 + eta) * 1j * e_minus + f30 * (1.0 - eta) * 1j * np.conj(e_plus))
    psi = field_from_samples(lat, n, q_stack(psi0, psi1), covering=2)

    # Conformal-frame phase gradients of p +/- beta/2.
    def grads(mm: int, nn: int):
        gx = pi * mm
        gy = -pi * (mm * lat.delta0 - nn) / lat.delta1
        return gx, gy

    px, py = grads(quad.m + am.r, quad.n + am.s)
    qx, qy = grads(quad.m - am.r, quad.n - am.s)
    dx0 = f00 * (1.0 - eta) * 1j * px * e_plus - f30 * (1.0 + eta) * 1j * qx * np.conj(e_minus)
    dy0 = f00 * (1.0 - eta) * 1j * py * e_plus - f30 * (1.0 + eta) * 1j * qy * np.conj(e_minus)
    dx1 = f00 * (1.0 + eta) * 1j * 1j * qx * e_minus - f30 * (1.0 - eta) * 1j * 1j * px * np.conj(e_plus)
    dy1 = f00 * (1.0 + eta) * 1j * 1j * qy * e_minus - f30 * (1.0 - eta) * 1j * 1j * py * np.conj(e_plus)
    dpsi = QOneForm(cx=psi.like(q_stack(dx0, dx1)), cy=psi.like(q_stack(dy0, dy1)))
    surface = SurfaceGrid(psi=psi, dpsi=dpsi)

    lam0 = f00 * np.exp(1j * p) + f30 * np.exp(-1j * p)
    lam1 = eta * 1j * (f00 * np.exp(1j * p) - f30 * np.exp(-1j * p))
    lam0_field = field_from_samples(lat, n, lam0, covering=2)
    lam1_field = field_from_samples(lat, n, lam1, covering=2)

    # The source remark prints a real prefactor in place of eta; record the gap.
    remark = (quad.m * lat.delta1 - (quad.n * lat.delta0 - am.s)) / \
             (am.r * lat.delta1 - (am.r * lat.delta0 - am.s))
    remark_gap = abs(complex(remark) - eta)

    return ConstructedTorus(quad=quad, f00=f00, f30=f30, surface=surface,
                            lam0=lam0_field, lam1=lam1_field,
                            remark_coeff_gap=float(remark_gap))


@dataclass(frozen=True)
class CheckItem:
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tol

    def payload(self) -> dict:
        return {"value": self.value, "tol": self.tol, "pass": self.passed}


@dataclass(frozen=True, eq=False)
class TorusReport:
    norm_spread: CheckItem
    sphere: CheckItem
    lagrangian: CheckItem
    parallel: CheckItem
    dirac: CheckItem
    conformal_gap: CheckItem      # max |E - G|
    shear: CheckItem              # max |F|
    homogeneous_spread: CheckItem  # spread of E over the grid
    sign_x: int
    sign_y: int
    lattice_periodic: bool
    trace_signs: tuple
    remark_coeff_gap: float

    @property
    def passed(self) -> bool:
        return all(item.passed for item in (
            self.norm_spread, self.sphere, self.lagrangian, self.parallel,
            self.dirac, self.conformal_gap, self.shear, self.homogeneous_spread))

    def residuals_payload(self) -> dict:
        return {
            "norm_spread": self.norm_spread.payload(),
            "sphere_max_re_omega": self.sphere.payload(),
            "lagrangian_max": self.lagrangian.payload(),
            "parallel": self.parallel.payload(),
            "dirac": self.dirac.payload(),
            "conformal_gap": self.conformal_gap.payload(),
            "shear": self.shear.payload(),
            "homogeneous_spread": self.homogeneous_spread.payload(),
            "section_signs": [self.sign_x, self.sign_y],
            "lattice_periodic": self.lattice_periodic,
            "trace_signs": list(self.trace_signs),
            "remark_coeff_gap": self.remark_coeff_gap,
        }


def verify_torus(torus: ConstructedTorus, fd_factor: float = 50.0) -> TorusReport:
    """Run every verification item on a constructed section.

    Sphere containment, the Lagrangian condition, and the parallel and Dirac
    residuals are measured by finite differences, independent of the attached
    closed-form differential; the homogeneity certificate (constant conformal
    fundamental form) uses the exact differential, where only roundoff enters.
    """
    quad = torus.quad
    am = quad.angle
    surface = torus.surface
    n = surface.n
    inv_sq = 1.0 / (n * n)

    norms = q_norm(surface.psi.values)
    max_norm_val = float(np.max(norms))
    spread = CheckItem(float(np.max(norms) - np.min(norms)),
                       1e-12 * max(1.0, max_norm_val))

    sph = sphere_residual(surface)           # finite differences
    omega_scale = max(1.0, _omega_scale(surface))
    sphere_item = CheckItem(sph.max_re_omega, fd_factor * inv_sq * omega_scale)

    fx, fy = surface.partials()
    theta_scale = max(1.0, float(np.max(q_norm(fx.values)))
                      * float(np.max(q_norm(fy.values))))
    lag_item = CheckItem(lagrangian_residual(surface),
                         fd_factor * inv_sq * theta_scale)

    gc = family_matrix_form(am, FamilyPoint(quad.eta))
    section = frame_convert(surface.psi, "epsilon", "epsilon_tilde", am)
    b_scale = max(float(np.linalg.norm(gc.bx)), float(np.linalg.norm(gc.by)))
    v_scale = float(np.max(np.sqrt(np.abs(section.values[..., 0]) ** 2
                                   + np.abs(section.values[..., 1]) ** 2)))
    par_item = CheckItem(parallel_residual(gc, section),
                         2.0 * fd_factor * inv_sq * v_scale * (1.0 + b_scale))

    row0, row1 = dirac_apply(am, torus.lam0, torus.lam1)
    dirac_val = float(np.max(np.abs(row0.values) + np.abs(row1.values)))
    lam_scale = float(np.max(np.sqrt(np.abs(torus.lam0.values) ** 2
                                     + np.abs(torus.lam1.values) ** 2)))
    freq = pi * max(abs(quad.m),
                    (abs(quad.m * am.lattice.delta0) + abs(quad.n)) / am.lattice.delta1)
    dirac_item = CheckItem(dirac_val,
                           2.0 * fd_factor * inv_sq * lam_scale * max(1.0, freq ** 3 / 6.0))

    form = fundamental_form(surface, analytic=True)
    e_vals, f_vals, g_vals = form.E.values, form.F.values, form.G.values
    e_level = max(float(np.median(e_vals)), 1e-300)
    conf_item = CheckItem(float(np.max(np.abs(e_vals - g_vals))), 1e-8 * e_level)
    shear_item = CheckItem(float(np.max(np.abs(f_vals))), 1e-8 * e_level)
    homog_item = CheckItem(float(np.max(e_vals) - np.min(e_vals)), 1e-8 * e_level)

    sign_x = (-1) ** ((quad.m + am.r) % 2)
    sign_y = (-1) ** ((quad.n + am.s) % 2)
    rolled_x = np.roll(surface.psi.values, -n, axis=0)
    rolled_y = np.roll(surface.psi.values, -n, axis=1)
    gap_x = float(np.max(q_norm(rolled_x - sign_x * surface.psi.values)))
    gap_y = float(np.max(q_norm(rolled_y - sign_y * surface.psi.values)))
    if max(gap_x, gap_y) > 1e-9 * max(1.0, max_norm_val):
        raise AssertionError("constructed section lost its doubled periodicity")
    sample = trace_closed_form(am, quad.eta)
    trace_signs = (int(np.sign(sample.g0.real)), int(np.sign(sample.g1.real)))

    return TorusReport(
        norm_spread=spread, sphere=sphere_item, lagrangian=lag_item,
        parallel=par_item, dirac=dirac_item, conformal_gap=conf_item,
        shear=shear_item, homogeneous_spread=homog_item,
        sign_x=sign_x, sign_y=sign_y,
        lattice_periodic=(sign_x == 1 and sign_y == 1),
        trace_signs=trace_signs,
        remark_coeff_gap=torus.remark_coeff_gap)


def _omega_scale(surface: SurfaceGrid) -> float:
    from .surface import connection_form
    form = connection_form(surface)
    return max(float(np.max(q_norm(form.omega.cx.values))),
               float(np.max(q_norm(form.omega.cy.values))))


def quad_payload(quad: SolutionQuad, report: Optional[TorusReport] = None) -> dict:
    """JSON document for one quad, optionally with verification residuals."""
    lat = quad.lattice
    payload = {
        "m": quad.m, "n": quad.n,
        "r": quad.angle.r, "s": quad.angle.s,
        "delta0": lat.delta0, "delta1": lat.delta1,
        "eta": complex_pair(quad.eta),
        "excluded": quad.excluded,
        "exact": quad.exact,
    }
    if report is not None:
        payload["residuals"] = report.residuals_payload()
        payload["pass"] = report.passed
    return payload
