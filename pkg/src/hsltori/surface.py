"""Sampled surfaces in H: right normals, connection forms, residual tests.

A surface is a nowhere-vanishing quaternion-valued field psi on a torus grid.
Everything geometric is derived from its differential: the right normal R
with *(d psi) = -(d psi) R, the connection form omega = -psi^{-1} d psi, the
pullback of the symplectic form, and the first fundamental form.  When a
surface comes from a closed form, the exact differential can be attached and
is used where a certificate sharper than finite differences is needed; the
residual checks themselves default to finite differences so that they stay
independent of the sampled derivative formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi
from typing import Optional

import numpy as np

from .grid import (GridField, QOneForm, QTwoForm, conformal_partials, ext_d,
                   field_from_samples, hodge_star, lattice_coords, max_norm,
                   wedge)
from .quaternion import (q_conj, q_inv, q_mul, q_norm, q_real, q_stack,
                         q_symplectic)
from .torus import AngleMap, TorusLattice, make_angle_map


class BadScale(ValueError):
    """Homogeneous tori need a positive radius."""


class DegenerateDifferential(ValueError):
    """|psi_x| vanishes on too much of the grid to define a right normal."""


class NotLagrangian(ValueError):
    """The right normal has a component outside the e^{-i beta} j circle."""


class ZeroSection(ValueError):
    """psi vanishes somewhere, so it has no connection form."""


@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    """A sampled surface; ``dpsi`` holds the exact differential when known."""

    psi: GridField
    dpsi: Optional[QOneForm] = None

    @property
    def lattice(self) -> TorusLattice:
        return self.psi.lattice

    @property
    def n(self) -> int:
        return self.psi.n

    @property
    def covering(self) -> int:
        return self.psi.covering

    def without_analytic(self) -> "SurfaceGrid":
        """Drop the exact differential, forcing finite differences."""
        return SurfaceGrid(psi=self.psi, dpsi=None)

    def partials(self, analytic: bool = False):
        """(psi_x, psi_y); finite differences unless ``analytic`` and available."""
        if analytic and self.dpsi is not None:
            return self.dpsi.cx, self.dpsi.cy
        return conformal_partials(self.psi)


@dataclass(frozen=True)
class FundamentalForm:
    E: GridField
    F: GridField
    G: GridField


@dataclass(frozen=True, eq=False)
class RightNormalResult:
    field: GridField
    max_sq_residual: float     # max |R^2 + 1|
    max_real_residual: float   # max |Re R|
    degenerate: np.ndarray     # boolean mask of points with |psi_x| ~ 0


@dataclass(frozen=True)
class AngleFit:
    r: int
    s: int
    beta0: float               # constant offset at the origin
    residual: float            # max phase mismatch against the affine model
    constant: bool             # (r, s) == (0, 0)


@dataclass(frozen=True, eq=False)
class ConnectionForm:
    omega: QOneForm
    flatness_residual: float   # max norm of d(omega) - omega ^ omega


@dataclass(frozen=True)
class SphereResidual:
    max_re_omega: float
    norm_spread: float         # max |psi| - min |psi| over the grid


def homogeneous_torus(lattice: TorusLattice, scale: float, n: int,
                      covering: int = 1) -> SurfaceGrid:
    """The product torus f = scale * (e^{2 pi x i} + j delta1 e^{2 pi y i / delta1}).

    Defined on rectangular lattices (delta0 = 0); |f| is constant, equal to
    scale * sqrt(1 + delta1^2).  The exact differential is attached.
    """
    if scale <= 0:
        raise BadScale(f"scale must be positive, got {scale}")
    if lattice.delta0 != 0.0:
        raise ValueError("homogeneous tori require a rectangular lattice (delta0 = 0)")
    xl, yl = lattice_coords(lattice, n, covering)
    d1 = lattice.delta1
    # Conformal coordinates: x = xl, y = delta1 * yl.
    c0 = scale * np.exp(2j * pi * xl)
    c1 = scale * d1 * np.exp(-2j * pi * yl)
    psi = field_from_samples(lattice, n, q_stack(c0, c1), covering)
    two_pi_i = 2j * pi
    fx = q_stack(scale * two_pi_i * np.exp(2j * pi * xl), np.zeros_like(c0))
    fy = q_stack(np.zeros_like(c0), -scale * two_pi_i * np.exp(-2j * pi * yl))
    dpsi = QOneForm(cx=psi.like(fx), cy=psi.like(fy))
    return SurfaceGrid(psi=psi, dpsi=dpsi)


def right_normal(surface: SurfaceGrid, analytic: bool = False,
                 degenerate_tol: float = 1e-12) -> RightNormalResult:
    """Pointwise right normal R = -psi_x^{-1} psi_y.

    Conformality is reported, not assumed: ``max_sq_residual`` measures
    |R^2 + 1| and ``max_real_residual`` measures |Re R|.  Points where
    |psi_x| is below ``degenerate_tol`` times the field scale are masked and
    reported, never interpolated.
    """
    fx, fy = surface.partials(analytic=analytic)
    nx = q_norm(fx.values)
    scale = float(np.max(nx))
    if scale == 0.0:
        raise DegenerateDifferential("psi_x vanishes identically")
    mask = nx < degenerate_tol * scale
    if mask.all():
        raise DegenerateDifferential("psi_x vanishes on the whole grid")
    safe_fx = np.where(mask[..., None], 1.0, fx.values)
    r_values = -q_mul(q_inv(safe_fx), fy.values)
    r_values = np.where(mask[..., None], 0.0, r_values)
    sq = q_mul(r_values, r_values)
    sq[..., 0] += 1.0
    keep = ~mask
    max_sq = float(np.max(q_norm(sq)[keep])) if keep.any() else 0.0
    max_re = float(np.max(np.abs(q_real(r_values))[keep])) if keep.any() else 0.0
    return RightNormalResult(field=fx.like(r_values), max_sq_residual=max_sq,
                             max_real_residual=max_re, degenerate=mask)


def _winding(phase_factor: np.ndarray, axis: int) -> float:
    """Total winding number of a unit-modulus field along one grid axis."""
    ratio = np.roll(phase_factor, -1, axis=axis) / phase_factor
    return float(np.sum(np.angle(ratio), axis=axis).mean() / (2.0 * pi))


def lagrangian_angle(normal: GridField, tol: float = 1e-6) -> AngleFit:
    """Extract beta with R = e^{-i beta} j and fit the integers (r, s).

    Raises ``NotLagrangian`` when R has a 1/i component beyond ``tol``
    relative to its norm.  A constant beta is flagged, not an error.
    """
    values = normal.values
    c0, c1 = values[..., 0], values[..., 1]
    scale = float(np.max(q_norm(values)))
    if scale == 0.0 or float(np.max(np.abs(c0))) > tol * scale:
        raise NotLagrangian("right normal is not of the form e^{-i beta} j")
    unit = c1 / np.abs(c1)
    # beta = -arg(c1); windings along the generators give (r, s) up to sign.
    cov = normal.covering
    r_fit = int(round(-_winding(unit, axis=0) / cov))
    s_fit = int(round(-_winding(unit, axis=1) / cov))
    beta0 = float(-np.angle(unit[0, 0]))
    if r_fit == 0 and s_fit == 0:
        residual = float(np.max(np.abs(np.angle(unit / unit[0, 0]))))
        return AngleFit(0, 0, beta0, residual, constant=True)
    am = make_angle_map(normal.lattice, r_fit, s_fit)
    xl, yl = lattice_coords(normal.lattice, normal.n, cov)
    model = np.exp(-1j * (am.beta_lattice(xl, yl) + beta0))
    residual = float(np.max(np.abs(np.angle(unit / model))))
    return AngleFit(r_fit, s_fit, beta0, residual, constant=False)


def connection_form(surface: SurfaceGrid, analytic: bool = False) -> ConnectionForm:
    """omega = -psi^{-1} d psi together with its flatness residual."""
    psi = surface.psi
    norms = q_norm(psi.values)
    if float(np.min(norms)) <= 1e-12 * float(np.max(norms)):
        raise ZeroSection("psi vanishes somewhere on the grid")
    inv = q_inv(psi.values)
    fx, fy = surface.partials(analytic=analytic)
    omega = QOneForm(cx=psi.like(-q_mul(inv, fx.values)),
                     cy=psi.like(-q_mul(inv, fy.values)))
    d_omega = ext_d(omega)
    sq = wedge(omega, omega)
    residual = float(np.max(q_norm(d_omega.c.values - sq.c.values)))
    return ConnectionForm(omega=omega, flatness_residual=residual)


def sphere_residual(surface: SurfaceGrid, analytic: bool = False) -> SphereResidual:
    """max |Re omega| over the grid, with the spread of |psi| as a cross-check.

    Both vanish exactly when the image lies on a hypersphere centred at the
    origin; Re omega equals -d log |psi|^2.
    """
    form = connection_form(surface, analytic=analytic)
    re_x = np.abs(q_real(form.omega.cx.values))
    re_y = np.abs(q_real(form.omega.cy.values))
    norms = q_norm(surface.psi.values)
    return SphereResidual(
        max_re_omega=float(max(np.max(re_x), np.max(re_y))),
        norm_spread=float(np.max(norms) - np.min(norms)))


def lagrangian_residual(surface: SurfaceGrid, analytic: bool = False) -> float:
    """max over the grid of |Theta(psi_x, psi_y)|, the symplectic pullback."""
    fx, fy = surface.partials(analytic=analytic)
    return float(np.max(np.abs(q_symplectic(fx.values, fy.values))))


def fundamental_form(surface: SurfaceGrid, analytic: bool = False) -> FundamentalForm:
    """First fundamental form E = g(psi_x, psi_x), F = g(psi_x, psi_y), G = g(psi_y, psi_y)."""
    fx, fy = surface.partials(analytic=analytic)
    e = (fx.values[..., 0] * np.conj(fx.values[..., 0])
         + fx.values[..., 1] * np.conj(fx.values[..., 1])).real
    g = (fy.values[..., 0] * np.conj(fy.values[..., 0])
         + fy.values[..., 1] * np.conj(fy.values[..., 1])).real
    f = (fx.values[..., 0] * np.conj(fy.values[..., 0])
         + fx.values[..., 1] * np.conj(fy.values[..., 1])).real
    return FundamentalForm(E=fx.like(e), F=fx.like(f), G=fx.like(g))


def surface_from_values(lattice: TorusLattice, n: int, values: np.ndarray,
                        covering: int = 1) -> SurfaceGrid:
    """Wrap externally supplied quaternion samples (no exact differential)."""
    return SurfaceGrid(psi=field_from_samples(lattice, n, values, covering))
