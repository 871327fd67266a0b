"""Discrete exterior calculus for doubly periodic fields on a torus grid.

Fields are sampled on a uniform cyclic grid aligned with the lattice
generators 1 and delta.  A grid of resolution ``n`` places ``covering * n``
samples per axis over ``covering`` fundamental cells, so the step in lattice
coordinates is always 1/n and wrap-around is exact.  ``covering = 2`` stores
sections that are periodic only on the index-four sublattice 2Z + 2*delta*Z.

One-form components are kept in the conformal frame (dx, dy) of z = x + y*i;
the Jacobian from grid axes to (x, y) is applied when differentiating, which
leaves the Hodge star as the plain conformal rotation *dx = -dy, *dy = dx.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Union

import numpy as np

from .quaternion import q_mul, q_norm, q_scalar
from .torus import TorusLattice
from .serialize import format_float


class GridTooCoarse(ValueError):
    """Central differences need at least four samples per axis."""


class GridMismatch(ValueError):
    """Operands live on different grids."""


@dataclass(frozen=True, eq=False)
class GridField:
    """A doubly periodic sampled field.

    ``values`` has shape (N, N) for real or complex fields and (N, N, 2) for
    quaternion-valued fields stored as left coefficient pairs, where
    N = covering * n.  Index [i, j] is the sample at lattice coordinates
    (i/n, j/n).  Arrays are never mutated after construction.
    """

    lattice: TorusLattice
    n: int
    covering: int
    values: np.ndarray

    def __post_init__(self):
        samples = self.covering * self.n
        if self.values.shape[:2] != (samples, samples):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{samples} samples per axis")

    @property
    def samples(self) -> int:
        return self.covering * self.n

    @property
    def spacing(self) -> float:
        """Grid step in lattice coordinates."""
        return 1.0 / self.n

    @property
    def is_pair(self) -> bool:
        return self.values.ndim == 3

    def pointwise_norm(self) -> np.ndarray:
        if self.is_pair:
            return q_norm(self.values)
        return np.abs(self.values)

    def like(self, values: np.ndarray) -> "GridField":
        return GridField(self.lattice, self.n, self.covering, values)


@dataclass(frozen=True, eq=False)
class QOneForm:
    """One-form cx*dx + cy*dy with components in the conformal frame."""

    cx: GridField
    cy: GridField

    @property
    def lattice(self) -> TorusLattice:
        return self.cx.lattice


@dataclass(frozen=True, eq=False)
class QTwoForm:
    """Two-form c * dx^dy."""

    c: GridField


def lattice_coords(lattice: TorusLattice, n: int, covering: int = 1):
    """Meshgrids (XL, YL) of lattice coordinates, indexing [i_x, i_y]."""
    t = np.arange(covering * n) / float(n)
    return np.meshgrid(t, t, indexing="ij")


def conformal_coords(lattice: TorusLattice, n: int, covering: int = 1):
    """Meshgrids (X, Y) of conformal coordinates z = x + y*i."""
    xl, yl = lattice_coords(lattice, n, covering)
    return xl + lattice.delta0 * yl, lattice.delta1 * yl


def field_from_samples(lattice: TorusLattice, n: int, values: np.ndarray,
                       covering: int = 1) -> GridField:
    return GridField(lattice, n, covering, np.asarray(values))


def same_grid(a, b) -> bool:
    return (a.lattice.delta0 == b.lattice.delta0
            and a.lattice.delta1 == b.lattice.delta1
            and a.n == b.n and a.covering == b.covering)


def _require_match(a, b):
    if not same_grid(a, b):
        raise GridMismatch("fields live on different grids")


def _axis_derivative(values: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    # Cyclic central difference; the wrap is exact on the periodic grid.
    return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2.0 * spacing)


def conformal_partials(field: GridField) -> tuple[GridField, GridField]:
    """Partial derivatives (f_x, f_y) in conformal coordinates.

    The grid axes run along the generators 1 and delta, so the axis-0
    difference is f_x and the axis-1 difference is the directional derivative
    along delta, from which f_y = (D_delta f - delta0 * f_x) / delta1.
    """
    if field.n < 4:
        raise GridTooCoarse(f"need n >= 4, got {field.n}")
    h = field.spacing
    d0 = _axis_derivative(field.values, 0, h)
    d1 = _axis_derivative(field.values, 1, h)
    lat = field.lattice
    fy = (d1 - lat.delta0 * d0) / lat.delta1
    return field.like(d0), field.like(fy)


def ext_d(obj: Union[GridField, QOneForm]) -> Union[QOneForm, QTwoForm]:
    """Exterior derivative: field -> one-form, one-form -> two-form."""
    if isinstance(obj, GridField):
        fx, fy = conformal_partials(obj)
        return QOneForm(cx=fx, cy=fy)
    if isinstance(obj, QOneForm):
        _require_match(obj.cx, obj.cy)
        gx, _ = conformal_partials(obj.cy)
        _, hy = conformal_partials(obj.cx)
        return QTwoForm(c=obj.cx.like(gx.values - hy.values))
    raise TypeError(f"cannot differentiate {type(obj).__name__}")


def hodge_star(omega: QOneForm) -> QOneForm:
    """Conformal Hodge star with *dx = -dy, *dy = dx."""
    return QOneForm(cx=omega.cy, cy=omega.cx.like(-omega.cx.values))


def _as_pair_values(field: GridField) -> np.ndarray:
    if field.is_pair:
        return field.values
    return q_scalar(field.values)


def wedge(omega: QOneForm, rho: QOneForm) -> QTwoForm:
    """Noncommutative wedge: (w^r)(dx, dy) = w(dx-slot)*r(dy-slot) - w(dy-slot)*r(dx-slot).

    Quaternion factor order is preserved; scalar operands are promoted.
    """
    _require_match(omega.cx, rho.cx)
    if omega.cx.is_pair or rho.cx.is_pair:
        wx, wy = _as_pair_values(omega.cx), _as_pair_values(omega.cy)
        rx, ry = _as_pair_values(rho.cx), _as_pair_values(rho.cy)
        c = q_mul(wx, ry) - q_mul(wy, rx)
    else:
        c = omega.cx.values * rho.cy.values - omega.cy.values * rho.cx.values
    return QTwoForm(c=omega.cx.like(c))


def max_norm(obj) -> float:
    """Sup over the grid of the pointwise quaternion norm."""
    if isinstance(obj, GridField):
        return float(np.max(obj.pointwise_norm()))
    if isinstance(obj, QOneForm):
        return max(max_norm(obj.cx), max_norm(obj.cy))
    if isinstance(obj, QTwoForm):
        return max_norm(obj.c)
    raise TypeError(f"cannot take max_norm of {type(obj).__name__}")


# ---------------------------------------------------------------------------
# CSV serialization: rows "ix,iy,w,x,y,z" with a header line.
# ---------------------------------------------------------------------------

def write_grid_csv(field: GridField, path) -> None:
    values = _as_pair_values(field)
    with open(path, "w", newline="") as fh:
        fh.write("ix,iy,w,x,y,z\n")
        samples = field.samples
        for ix in range(samples):
            for iy in range(samples):
                c0 = values[ix, iy, 0]
                c1 = values[ix, iy, 1]
                fh.write("%d,%d,%s,%s,%s,%s\n" % (
                    ix, iy,
                    format_float(c0.real), format_float(c0.imag),
                    format_float(c1.real), format_float(c1.imag)))


def read_grid_csv(path) -> np.ndarray:
    """Read quaternion samples; returns an (N, N, 2) complex array."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["ix", "iy", "w", "x", "y", "z"]:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = [(int(r[0]), int(r[1]), float(r[2]), float(r[3]),
                 float(r[4]), float(r[5])) for r in reader]
    if not rows:
        raise ValueError("empty grid CSV")
    samples = max(r[0] for r in rows) + 1
    if len(rows) != samples * samples:
        raise ValueError("grid CSV is not a full square grid")
    values = np.zeros((samples, samples, 2), dtype=complex)
    for ix, iy, w, x, y, z in rows:
        values[ix, iy, 0] = complex(w, x)
        values[ix, iy, 1] = complex(y, z)
    return values
