"""Quaternion arithmetic, hermitian product, and the metric/symplectic pairings.

A quaternion a = w + x*i + y*j + z*k is held either as four real parts (the
scalar ``Quaternion`` class) or, for gridded data, as the complex pair
(w + x*i, y + z*i) so that a = c0 + c1*j with complex coefficients acting
from the left.  Scalars are doubles throughout; the generator relations are
i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.

The C^2 identification used for ``split_complex`` is the separate convention
a = (w + x*i, y - z*i); it differs from the left-coefficient pair by a
conjugation in the second slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class ComplexPair(NamedTuple):
    """Coordinates of a quaternion in C^2 under (w + xi, y - zi)."""

    first: complex
    second: complex

    def norm_sq(self) -> float:
        return abs(self.first) ** 2 + abs(self.second) ** 2


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + x*i + y*j + z*k with double-precision parts."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a, b = self, other
            return Quaternion(
                a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            )
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def inverse(self) -> "Quaternion":
        n = self.norm_sq()
        if n == 0.0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return Quaternion(self.w / n, -self.x / n, -self.y / n, -self.z / n)

    def to_left_pair(self) -> tuple[complex, complex]:
        """Left-coefficient split a = c0 + c1*j with c0 = w+xi, c1 = y+zi."""
        return complex(self.w, self.x), complex(self.y, self.z)

    @staticmethod
    def from_left_pair(c0: complex, c1: complex) -> "Quaternion":
        return Quaternion(c0.real, c0.imag, c1.real, c1.imag)

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return abs(self - other) <= tol


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Quaternion product a*b."""
    return a * b


def qherm(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hermitian product <a, b> = a * conj(b); its real part of <a,a> is |a|^2."""
    return a * b.conj()


def metric(a: Quaternion, b: Quaternion) -> float:
    """Euclidean inner product g(a, b) = Re <a, b> on R^4."""
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z


def symplectic(a: Quaternion, b: Quaternion) -> float:
    """Symplectic pairing g(a*i, b), written so antisymmetry is bitwise exact."""
    return (a.w * b.x - a.x * b.w) + (a.z * b.y - a.y * b.z)


def pairings(a: Quaternion, b: Quaternion) -> tuple[float, float]:
    """Return (metric, symplectic) evaluated on the pair (a, b)."""
    return metric(a, b), symplectic(a, b)


def split_complex(a: Quaternion) -> ComplexPair:
    """C^2 coordinates (w + xi, y - zi) of a quaternion."""
    return ComplexPair(complex(a.w, a.x), complex(a.y, -a.z))


def join_complex(pair: ComplexPair) -> Quaternion:
    """Inverse of ``split_complex``."""
    first, second = complex(pair[0]), complex(pair[1])
    return Quaternion(first.real, first.imag, second.real, -second.imag)


# ---------------------------------------------------------------------------
# Vectorised quaternion arrays.
#
# A quaternion-valued array is an ndarray of shape (..., 2), complex128, whose
# last axis holds the left coefficients (c0, c1) of a = c0 + c1*j.  All the
# functions below broadcast over the leading axes.
# ---------------------------------------------------------------------------

def q_stack(c0, c1) -> np.ndarray:
    c0 = np.asarray(c0, dtype=complex)
    c1 = np.asarray(c1, dtype=complex)
    return np.stack(np.broadcast_arrays(c0, c1), axis=-1)


def q_scalar(c) -> np.ndarray:
    """Embed a complex scalar or array as the quaternion c + 0*j."""
    c = np.asarray(c, dtype=complex)
    return q_stack(c, np.zeros_like(c))


def q_from_parts(w, x, y, z) -> np.ndarray:
    w, x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (w, x, y, z)))
    return q_stack(w + 1j * x, y + 1j * z)


def q_parts(a: np.ndarray):
    c0, c1 = a[..., 0], a[..., 1]
    return c0.real, c0.imag, c1.real, c1.imag


def q_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a0 + a1 j)(b0 + b1 j) = (a0 b0 - a1 conj(b1)) + (a0 b1 + a1 conj(b0)) j."""
    a0, a1 = a[..., 0], a[..., 1]
    b0, b1 = b[..., 0], b[..., 1]
    return np.stack((a0 * b0 - a1 * np.conj(b1),
                     a0 * b1 + a1 * np.conj(b0)), axis=-1)


def q_conj(a: np.ndarray) -> np.ndarray:
    return np.stack((np.conj(a[..., 0]), -a[..., 1]), axis=-1)


def q_norm_sq(a: np.ndarray) -> np.ndarray:
    return np.abs(a[..., 0]) ** 2 + np.abs(a[..., 1]) ** 2


def q_norm(a: np.ndarray) -> np.ndarray:
    return np.sqrt(q_norm_sq(a))


def q_inv(a: np.ndarray) -> np.ndarray:
    n = q_norm_sq(a)
    return q_conj(a) / n[..., None]


def q_real(a: np.ndarray) -> np.ndarray:
    return a[..., 0].real


def q_metric(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[..., 0] * np.conj(b[..., 0]) + a[..., 1] * np.conj(b[..., 1])).real


def q_symplectic(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = q_parts(a)
    bw, bx, by, bz = q_parts(b)
    return (aw * bx - ax * bw) + (az * by - ay * bz)
