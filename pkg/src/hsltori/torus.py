"""Torus lattices Z + delta*Z and the affine Lagrangian angle maps on them.

The lattice parameter delta = delta0 + delta1*i (delta1 > 0) fixes a flat
torus; an angle map is the harmonic (affine) map

    beta(x, y) = 2*pi*r*x - 2*pi*(r*delta0 - s)/delta1 * y       (r, s integers)

whose exponential e^{i beta} is doubly periodic.  In lattice coordinates
(xl, yl), with z = xl + yl*delta, the same map is 2*pi*(r*xl + s*yl), which is
the form used on sampling grids because its periodicity is exact there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi
from typing import Optional, Union

import numpy as np

RationalLike = Union[Fraction, int, str]


class NonPositiveDelta1(ValueError):
    """delta1 must be positive for Z + delta*Z to be a lattice of a torus."""


class ConstantAngle(ValueError):
    """(r, s) = (0, 0) would make the angle map constant."""


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


@dataclass(frozen=True)
class TorusLattice:
    """The lattice Z + (delta0 + delta1*i) Z, optionally with exact rational data.

    ``delta0_exact`` and ``delta1_sq_exact`` hold delta0 and delta1^2 as
    fractions when supplied; the classification constraint is then checked in
    exact arithmetic.
    """

    delta0: float
    delta1: float
    delta0_exact: Optional[Fraction] = None
    delta1_sq_exact: Optional[Fraction] = None

    @property
    def delta(self) -> complex:
        return complex(self.delta0, self.delta1)

    @property
    def is_exact(self) -> bool:
        return self.delta0_exact is not None and self.delta1_sq_exact is not None

    @property
    def in_moduli_closure(self) -> bool:
        """Whether delta lies in the closure of the standard moduli domain.

        Reported only; membership is never enforced.
        """
        if self.is_exact:
            norm_sq = self.delta0_exact ** 2 + self.delta1_sq_exact
            return norm_sq >= 1 and abs(self.delta0_exact) <= Fraction(1, 2)
        eps = 1e-12
        norm_sq = self.delta0 ** 2 + self.delta1 ** 2
        return norm_sq >= 1.0 - eps and abs(self.delta0) <= 0.5 + eps


def make_lattice(delta0: float, delta1: float) -> TorusLattice:
    """Validated lattice from floating-point parameters."""
    if not delta1 > 0.0:
        raise NonPositiveDelta1(f"delta1 must be positive, got {delta1}")
    return TorusLattice(float(delta0), float(delta1))


def make_lattice_exact(delta0: RationalLike, delta1_sq: RationalLike) -> TorusLattice:
    """Lattice with delta0 and delta1^2 given as exact rationals."""
    d0 = as_fraction(delta0)
    d1sq = as_fraction(delta1_sq)
    if not d1sq > 0:
        raise NonPositiveDelta1(f"delta1^2 must be positive, got {d1sq}")
    return TorusLattice(float(d0), float(np.sqrt(float(d1sq))),
                        delta0_exact=d0, delta1_sq_exact=d1sq)


@dataclass(frozen=True)
class AngleMap:
    """Affine angle map beta = 2*pi*r*x - 2*pi*(r*delta0 - s)/delta1 * y."""

    r: int
    s: int
    lattice: TorusLattice

    @property
    def beta_x(self) -> float:
        return 2.0 * pi * self.r

    @property
    def beta_y(self) -> float:
        lat = self.lattice
        return -2.0 * pi * (self.r * lat.delta0 - self.s) / lat.delta1

    @property
    def beta_z(self) -> complex:
        # (beta_x - i*beta_y)/2 = pi*(r*delta1 + (r*delta0 - s)i)/delta1
        return complex(0.5 * self.beta_x, -0.5 * self.beta_y)

    @property
    def beta_zbar(self) -> complex:
        return np.conj(self.beta_z)

    def beta_conformal(self, x, y):
        """beta at conformal coordinates (x, y); affine, not reduced mod 2*pi."""
        return self.beta_x * np.asarray(x, dtype=float) + self.beta_y * np.asarray(y, dtype=float)

    def beta_lattice(self, xl, yl):
        """beta at lattice coordinates z = xl + yl*delta; equals 2*pi*(r*xl + s*yl)."""
        return 2.0 * pi * (self.r * np.asarray(xl, dtype=float)
                           + self.s * np.asarray(yl, dtype=float))


def make_angle_map(lattice: TorusLattice, r: int, s: int) -> AngleMap:
    if r == 0 and s == 0:
        raise ConstantAngle("(r, s) = (0, 0) gives a constant angle map")
    return AngleMap(int(r), int(s), lattice)


def eval_angle(am: AngleMap, x: float, y: float) -> float:
    """Value of beta at conformal (x, y), reduced to [0, 2*pi)."""
    return float(np.mod(am.beta_conformal(x, y), 2.0 * pi))
