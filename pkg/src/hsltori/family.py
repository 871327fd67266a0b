"""The family of flat connections attached to an affine angle map.

For a harmonic (affine) angle map beta the trivial connection is deformed by
its Hopf field into a circle of flat connections, extended to all nonzero
zeta = eta^2.  In the gauged frame the connection form is a pair of constant
traceless 2x2 matrices

    Bx = (beta_zbar*zeta + beta_z) / (4*zeta) * M(zeta)
    By = (beta_zbar*conj(delta)*zeta + beta_z*delta) / (4*zeta) * M(zeta)
    M(zeta) = [[i(zeta+1), zeta-1], [zeta-1, -i(zeta+1)]]

evaluated along the torus generators 1 and delta.  Flatness is exact: both
matrices are multiples of M(zeta), so they commute and have zero exterior
derivative.  The module also hosts the Dirac operator with potential, frame
conversions, and parallel-transport residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from .grid import (GridField, QOneForm, conformal_partials, ext_d,
                   field_from_samples, hodge_star, lattice_coords)
from .quaternion import q_mul, q_stack
from .torus import AngleMap


class ZeroEta(ValueError):
    """The family is parametrized by nonzero eta."""


class FrameMismatch(ValueError):
    """Section and connection use incompatible frames or grids."""


TRACE_MATRIX_DOC = "M(zeta) = [[i(zeta+1), zeta-1], [zeta-1, -i(zeta+1)]]"


@dataclass(frozen=True)
class FamilyPoint:
    """A point eta of the parameter curve; zeta = eta^2."""

    eta: complex

    def __post_init__(self):
        if self.eta == 0:
            raise ZeroEta("eta must be nonzero")

    @property
    def zeta(self) -> complex:
        return self.eta * self.eta

    @property
    def on_circle(self) -> bool:
        return abs(abs(self.eta) - 1.0) <= 1e-12


@dataclass(frozen=True, eq=False)
class GaugedConnection:
    """Constant matrix connection form of the gauged family member."""

    am: AngleMap
    point: FamilyPoint
    bx: np.ndarray   # 2x2 complex, evaluated on the generator 1
    by: np.ndarray   # 2x2 complex, evaluated on the generator delta


def trace_matrix(zeta: complex) -> np.ndarray:
    return np.array([[1j * (zeta + 1.0), zeta - 1.0],
                     [zeta - 1.0, -1j * (zeta + 1.0)]], dtype=complex)


def family_matrix_form(am: AngleMap, point: FamilyPoint) -> GaugedConnection:
    zeta = point.zeta
    m = trace_matrix(zeta)
    delta = am.lattice.delta
    mu0 = (am.beta_zbar * zeta + am.beta_z) / (4.0 * zeta)
    mu1 = (am.beta_zbar * np.conj(delta) * zeta + am.beta_z * delta) / (4.0 * zeta)
    return GaugedConnection(am=am, point=point, bx=mu0 * m, by=mu1 * m)


def gauge_matrix(am: AngleMap, x: float, y: float) -> np.ndarray:
    """Gauge h = diag(e^{i beta/2}, e^{-i beta/2}) at conformal (x, y).

    On lattice translations it changes sign by (-1)^(m*r + n*s), so it lives
    on the doubled torus whenever r or s is odd.
    """
    half = 0.5 * am.beta_conformal(x, y)
    return np.array([[np.exp(1j * half), 0.0], [0.0, np.exp(-1j * half)]],
                    dtype=complex)


def gauge_antiperiodic(am: AngleMap) -> bool:
    return (am.r % 2 != 0) or (am.s % 2 != 0)


def hopf_one_form(am: AngleMap, n: int, covering: int = 1) -> QOneForm:
    """Hopf-field one-form of the trivial connection for a Lagrangian normal.

    Samples (1/4) [ (d beta) i + *(d beta) i e^{-i beta} j ] on the grid.
    """
    lat = am.lattice
    xl, yl = lattice_coords(lat, n, covering)
    phase = np.exp(-1j * am.beta_lattice(xl, yl))
    bx, by = am.beta_x, am.beta_y
    ones = np.ones_like(phase)
    cx = q_stack(0.25j * bx * ones, 0.25j * by * phase)
    cy = q_stack(0.25j * by * ones, -0.25j * bx * phase)
    lead = field_from_samples(lat, n, cx, covering)
    return QOneForm(cx=lead, cy=lead.like(cy))


def hopf_from_normal(normal: GridField) -> QOneForm:
    """Hopf-field one-form (1/4) [ (dR) R - *(dR) ] for a general right normal.

    Finite-difference realization; agrees with ``hopf_one_form`` to truncation
    order when R = e^{-i beta} j.
    """
    d_r = ext_d(normal)
    star = hodge_star(d_r)
    r = normal.values
    cx = 0.25 * (q_mul(d_r.cx.values, r) - star.cx.values)
    cy = 0.25 * (q_mul(d_r.cy.values, r) - star.cy.values)
    return QOneForm(cx=normal.like(cx), cy=normal.like(cy))


def _alpha_and_twist(am: AngleMap, n: int, covering: int):
    alpha = hopf_one_form(am, n, covering)
    lat = am.lattice
    xl, yl = lattice_coords(lat, n, covering)
    normal = q_stack(np.zeros_like(xl, dtype=complex),
                     np.exp(-1j * am.beta_lattice(xl, yl)))
    twisted = QOneForm(
        cx=alpha.cx.like(q_mul(alpha.cx.values, normal)),
        cy=alpha.cy.like(q_mul(alpha.cy.values, normal)))
    return alpha, twisted


def associated_family_form(am: AngleMap, theta: float, n: int,
                           covering: int = 1) -> QOneForm:
    """Quaternionic connection form of the family member at zeta = e^{i theta}.

    The member is d plus the right multiplier
    (cos(theta) - 1) alpha + sin(theta) (alpha e^{-i beta} j).
    """
    alpha, twisted = _alpha_and_twist(am, n, covering)
    c = cos(theta) - 1.0
    s = sin(theta)
    return QOneForm(
        cx=alpha.cx.like(c * alpha.cx.values + s * twisted.cx.values),
        cy=alpha.cy.like(c * alpha.cy.values + s * twisted.cy.values))


def sphere_family_form(am: AngleMap, theta: float, n: int,
                       covering: int = 1) -> QOneForm:
    """The trace-free combination -alpha - cos(theta) alpha + sin(theta) alpha e^{-i beta} j.

    These are exactly the connection forms of sphere-contained members; the
    member sits at zeta = -e^{-i theta} in the parametrization of
    ``associated_family_form``.
    """
    alpha, twisted = _alpha_and_twist(am, n, covering)
    c = -1.0 - cos(theta)
    s = sin(theta)
    return QOneForm(
        cx=alpha.cx.like(c * alpha.cx.values + s * twisted.cx.values),
        cy=alpha.cy.like(c * alpha.cy.values + s * twisted.cy.values))


def connection_form_at(am: AngleMap, point: FamilyPoint, n: int,
                       covering: int = 1):
    """Quaternionic connection form of the member at eta, via the frame matrices.

    Valid on |eta| = 1, where the matrix-valued form is the matrix of a right
    quaternion multiplier; returns (one-form, consistency residual) where the
    residual measures how well the second matrix row matches the conjugate
    structure [[w0, w1], [-conj(w1), conj(w0)]].
    """
    if not point.on_circle:
        raise ValueError("the quaternionic form exists only on |eta| = 1")
    zeta = point.zeta
    lat = am.lattice
    xl, yl = lattice_coords(lat, n, covering)
    beta = am.beta_lattice(xl, yl)
    em, ep = np.exp(-1j * beta), np.exp(1j * beta)
    a = (1.0 / zeta - 1.0) / 4.0
    b = (zeta - 1.0) / 4.0

    def slots(dz_coeff: complex, dzbar_coeff: complex):
        n00 = 1j * (dz_coeff * a + dzbar_coeff * b) * np.ones_like(beta)
        n01 = -dz_coeff * a * em + dzbar_coeff * b * em
        n10 = -dz_coeff * a * ep + dzbar_coeff * b * ep
        n11 = -1j * (dz_coeff * a + dzbar_coeff * b) * np.ones_like(beta)
        return n00, n01, n10, n11

    bz, bzb = am.beta_z, am.beta_zbar
    x00, x01, x10, x11 = slots(bz, bzb)
    y00, y01, y10, y11 = slots(1j * bz, -1j * bzb)
    residual = max(
        float(np.max(np.abs(x10 + np.conj(x01)))),
        float(np.max(np.abs(x11 - np.conj(x00)))),
        float(np.max(np.abs(y10 + np.conj(y01)))),
        float(np.max(np.abs(y11 - np.conj(y00)))))
    lead = field_from_samples(lat, n, q_stack(x00, x01), covering)
    return QOneForm(cx=lead, cy=lead.like(q_stack(y00, y01))), residual


def dirac_apply(am: AngleMap, lam0: GridField, lam1: GridField):
    """Apply the Dirac operator with potential to a pair of complex fields.

    Rows: (d/dz) lam1 + (beta_z / 2) lam0 and -(d/dzbar) lam0 + (beta_zbar / 2) lam1,
    with d/dz = (d/dx - i d/dy)/2 realized by central differences.
    """
    l0x, l0y = conformal_partials(lam0)
    l1x, l1y = conformal_partials(lam1)
    dz_l1 = 0.5 * (l1x.values - 1j * l1y.values)
    dzbar_l0 = 0.5 * (l0x.values + 1j * l0y.values)
    row0 = dz_l1 + 0.5 * am.beta_z * lam0.values
    row1 = -dzbar_l0 + 0.5 * am.beta_zbar * lam1.values
    return lam0.like(row0), lam1.like(row1)


FRAMES = ("epsilon", "epsilon_tilde", "theta")

# theta-frame coefficients convert to the gauged frame through the constant
# matrix [[1, i], [i, 1]] acting on row vectors; det = 2.
_THETA_TO_TILDE = np.array([[1.0, 1j], [1j, 1.0]], dtype=complex)
_TILDE_TO_THETA = np.array([[0.5, -0.5j], [-0.5j, 0.5]], dtype=complex)


def frame_convert(section: GridField, src: str, dst: str, am: AngleMap) -> GridField:
    """Convert coefficient pairs of a section between the three frames.

    Frames: "epsilon" (the unitary frame (1, j)), "epsilon_tilde" (gauged by
    diag(e^{i beta/2}, e^{-i beta/2})), and "theta" (the holomorphic frame).
    Coefficients are rows acting on the frame from the left, stored in the
    two slots of the field.
    """
    for name in (src, dst):
        if name not in FRAMES:
            raise FrameMismatch(f"unknown frame {name!r}")
    if not section.is_pair:
        raise FrameMismatch("section must hold a coefficient pair")
    if src == dst:
        return section.like(section.values.copy())
    xl, yl = lattice_coords(section.lattice, section.n, section.covering)
    half = np.exp(0.5j * am.beta_lattice(xl, yl))
    v = section.values

    if src == "epsilon":
        v = np.stack((v[..., 0] / half, v[..., 1] * half), axis=-1)
    elif src == "theta":
        v = np.einsum("ijk,kl->ijl", v, _THETA_TO_TILDE)
    # v is now in the gauged frame
    if dst == "epsilon":
        v = np.stack((v[..., 0] * half, v[..., 1] / half), axis=-1)
    elif dst == "theta":
        v = np.einsum("ijk,kl->ijl", v, _TILDE_TO_THETA)
    return section.like(v)


def theta_frame_section(am: AngleMap, n: int, covering: int = 1) -> GridField:
    """The holomorphic frame section e^{i beta/2} + i e^{-i beta/2} j in the (1, j) frame."""
    xl, yl = lattice_coords(am.lattice, n, covering)
    half = np.exp(0.5j * am.beta_lattice(xl, yl))
    values = q_stack(half, 1j / half)
    return field_from_samples(am.lattice, n, values, covering)


def parallel_residual(gc: GaugedConnection, section: GridField) -> float:
    """Max over the grid of |D_1 v + Bx v| + |D_delta v + By v|.

    ``section`` holds the C^2 coefficient column v in the gauged frame; the
    derivatives run along the torus generators, matching the two matrices.
    Sections gauged by an anti-periodic h live on the doubled grid.
    """
    if not section.is_pair:
        raise FrameMismatch("section must hold a coefficient pair")
    if gauge_antiperiodic(gc.am) and section.covering < 2:
        raise FrameMismatch("anti-periodic gauge requires a doubled grid")
    h = section.spacing
    v = section.values
    d0 = (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) / (2.0 * h)
    d1 = (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2.0 * h)
    r0 = d0 + np.einsum("ab,ijb->ija", gc.bx, v)
    r1 = d1 + np.einsum("ab,ijb->ija", gc.by, v)
    norms = (np.sqrt(np.abs(r0[..., 0]) ** 2 + np.abs(r0[..., 1]) ** 2)
             + np.sqrt(np.abs(r1[..., 0]) ** 2 + np.abs(r1[..., 1]) ** 2))
    return float(np.max(norms))


def dbar_residual(am: AngleMap, phi: GridField) -> QOneForm:
    """Residual one-form of the quaternionic holomorphic structure.

    (1/2) [ d phi - *(d phi) e^{-i beta} j ]; a section is holomorphic for the
    right normal e^{-i beta} j when this vanishes.
    """
    d_phi = ext_d(phi)
    star = hodge_star(d_phi)
    xl, yl = lattice_coords(phi.lattice, phi.n, phi.covering)
    normal = q_stack(np.zeros_like(xl, dtype=complex),
                     np.exp(-1j * am.beta_lattice(xl, yl)))
    cx = 0.5 * (d_phi.cx.values - q_mul(star.cx.values, normal))
    cy = 0.5 * (d_phi.cy.values - q_mul(star.cy.values, normal))
    return QOneForm(cx=phi.like(cx), cy=phi.like(cy))
