"""Holonomy matrices, closed-form traces, and spectral scans on |eta| = 1.

The gauged connection form is constant along the torus generators, so the
holonomy around each generator is a single matrix exponential of a traceless
symmetric 2x2 matrix, computed in closed form.  The traces

    g0 = 2 cos((beta_zbar*zeta + beta_z) / (2*eta))
    g1 = 2 cos((beta_zbar*conj(delta)*zeta + beta_z*delta) / (2*eta))

are single-valued in eta (zeta = eta^2).  A scan of the unit circle locates
the zeros of the trace discriminant g0^2 - 4 and reports numerical first and
second derivative magnitudes at each zero.  (The discriminant is written
[h0]^2 - 4 in one place of the source material; only g0 is ever defined, and
it is treated as the same function here.)
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .family import FamilyPoint, GaugedConnection, ZeroEta, family_matrix_form
from .serialize import format_float
from .torus import AngleMap


@dataclass(frozen=True, eq=False)
class HolonomyPair:
    g0_matrix: np.ndarray
    g1_matrix: np.ndarray
    eta: complex


@dataclass(frozen=True)
class SpectralSample:
    eta: complex
    g0: complex
    g1: complex

    @property
    def disc0(self) -> complex:
        return self.g0 * self.g0 - 4.0

    @property
    def disc1(self) -> complex:
        return self.g1 * self.g1 - 4.0


@dataclass(frozen=True)
class ZeroReport:
    phi: float
    disc_abs: float
    d1_abs: float
    d2_abs: float


@dataclass(frozen=True, eq=False)
class SpectralScan:
    am: AngleMap
    phis: np.ndarray
    samples: list
    zeros: list
    scale: float     # max |disc0| over the scanned circle


def expm_traceless(a: complex, b: complex) -> np.ndarray:
    """exp of G = [[a, b], [b, -a]].

    Equals cosh(t) I + (sinh(t)/t) G with t = sqrt(a^2 + b^2); both factors
    are even in t, so the branch of the root is immaterial, and the t -> 0
    limit is taken by series.
    """
    a = complex(a)
    b = complex(b)
    t_sq = a * a + b * b
    t = np.sqrt(t_sq)
    c = np.cosh(t)
    if abs(t) < 1e-6:
        s = 1.0 + t_sq / 6.0 + t_sq * t_sq / 120.0
    else:
        s = np.sinh(t) / t
    return np.array([[c + s * a, s * b], [s * b, c - s * a]], dtype=complex)


def holonomy_matrices(gc: GaugedConnection) -> HolonomyPair:
    """Holonomy around the generators: exp of minus the connection form."""
    g0 = expm_traceless(-gc.bx[0, 0], -gc.bx[0, 1])
    g1 = expm_traceless(-gc.by[0, 0], -gc.by[0, 1])
    return HolonomyPair(g0_matrix=g0, g1_matrix=g1, eta=gc.point.eta)


def trace_closed_form(am: AngleMap, eta: complex) -> SpectralSample:
    """Closed-form holonomy traces at eta (the root of zeta)."""
    eta = complex(eta)
    if eta == 0:
        raise ZeroEta("eta must be nonzero")
    zeta = eta * eta
    delta = complex(am.lattice.delta0, am.lattice.delta1)
    u0 = (am.beta_zbar * zeta + am.beta_z) / (2.0 * eta)
    u1 = (am.beta_zbar * np.conj(delta) * zeta + am.beta_z * delta) / (2.0 * eta)
    return SpectralSample(eta=eta, g0=complex(2.0 * np.cos(u0)),
                          g1=complex(2.0 * np.cos(u1)))


def _disc0_abs(am: AngleMap, phi: float) -> float:
    return abs(trace_closed_form(am, np.exp(1j * phi)).disc0)


def _golden_minimize(f, lo: float, hi: float, iterations: int = 90) -> float:
    """Golden-section minimization of f on [lo, hi]."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def spectral_scan(am: AngleMap, samples: int = 1024,
                  zero_tol: float = 1e-9,
                  derivative_step: float = 1e-4) -> SpectralScan:
    """Sample eta = e^{i phi} and locate the zeros of the trace discriminant.

    Zeros are local minima of |disc0| refined by golden-section search and
    accepted when |disc0| falls below ``zero_tol`` times the circle maximum.
    Each zero carries central-difference estimates of |d disc0 / d phi| and
    |d^2 disc0 / d phi^2| at step ``derivative_step``.
    """
    if samples < 16:
        raise ValueError(f"need at least 16 samples, got {samples}")
    phis = 2.0 * pi * np.arange(samples) / samples
    sampled = [trace_closed_form(am, np.exp(1j * phi)) for phi in phis]
    disc = np.array([abs(s.disc0) for s in sampled])
    scale = float(np.max(disc))
    if scale == 0.0:
        scale = 1.0

    spacing = 2.0 * pi / samples
    candidates = np.nonzero((disc <= np.roll(disc, 1)) & (disc <= np.roll(disc, -1)))[0]
    zeros = []
    for idx in candidates:
        phi0 = phis[idx]
        refined = _golden_minimize(lambda p: _disc0_abs(am, p),
                                   phi0 - spacing, phi0 + spacing)
        value = _disc0_abs(am, refined)
        if value > zero_tol * scale:
            continue
        refined = float(np.mod(refined, 2.0 * pi))
        if any(min(abs(refined - z.phi), 2.0 * pi - abs(refined - z.phi)) < 0.5 * spacing
               for z in zeros):
            continue
        h = derivative_step
        f_m, f_p = _disc0_abs(am, refined - h), _disc0_abs(am, refined + h)
        # disc0 is real and nonpositive on the circle, so |disc0| = -disc0.
        d1 = abs(f_p - f_m) / (2.0 * h)
        d2 = abs(f_p - 2.0 * value + f_m) / (h * h)
        zeros.append(ZeroReport(phi=refined, disc_abs=value, d1_abs=d1, d2_abs=d2))
    zeros.sort(key=lambda z: z.phi)
    return SpectralScan(am=am, phis=phis, samples=sampled, zeros=zeros, scale=scale)


def write_scan_csv(scan: SpectralScan, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("phi,eta_re,eta_im,g0_re,g0_im,g1_re,g1_im,disc0_abs,disc1_abs\n")
        for phi, s in zip(scan.phis, scan.samples):
            fh.write(",".join(format_float(v) for v in (
                phi, s.eta.real, s.eta.imag, s.g0.real, s.g0.imag,
                s.g1.real, s.g1.imag, abs(s.disc0), abs(s.disc1))) + "\n")


def zeros_json_payload(scan: SpectralScan) -> list:
    return [{"phi": z.phi, "disc_abs": z.disc_abs,
             "d1_abs": z.d1_abs, "d2_abs": z.d2_abs} for z in scan.zeros]
