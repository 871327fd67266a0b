"""Stereographic OBJ export of sphere-contained surfaces.

The normalized surface psi / |psi| lies on the unit three-sphere; it is
projected from a configurable pole to R^3 and written as a quad mesh over
the periodic grid.  Vertices falling onto the pole are clamped and flagged
rather than dropped, so the mesh always has the full grid topology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaternion import q_norm, q_parts
from .serialize import format_float
from .surface import SurfaceGrid, sphere_residual


class NotSpherical(ValueError):
    """The surface does not lie on a hypersphere centred at the origin."""


POLES = {
    "w+": (0, +1.0), "w-": (0, -1.0),
    "x+": (1, +1.0), "x-": (1, -1.0),
    "y+": (2, +1.0), "y-": (2, -1.0),
    "z+": (3, +1.0), "z-": (3, -1.0),
}


@dataclass(frozen=True, eq=False)
class MeshResult:
    vertices: np.ndarray        # (N*N, 3)
    faces: list                 # 1-indexed quads
    clamped: int                # vertices adjacent to the pole
    degenerate_faces: int       # faces with (near) zero area


def project_surface(surface: SurfaceGrid, pole: str = "w+",
                    spread_tol: float = 1e-6,
                    clamp_eps: float = 1e-9) -> MeshResult:
    """Stereographic projection of psi/|psi| from the given pole axis.

    For the default pole the map is (x, y, z) / (1 - w).  Raises
    ``NotSpherical`` when the spread of |psi| exceeds ``spread_tol`` relative
    to its mean (equivalently, when the connection form has a real part).
    """
    if pole not in POLES:
        raise ValueError(f"unknown pole {pole!r}; choose one of {sorted(POLES)}")
    norms = q_norm(surface.psi.values)
    mean = float(np.mean(norms))
    if mean == 0.0:
        raise NotSpherical("surface is identically zero")
    spread = float(np.max(norms) - np.min(norms))
    if spread > spread_tol * mean:
        res = sphere_residual(surface)
        raise NotSpherical(
            f"|psi| spreads by {spread:.3g} (max |Re omega| = {res.max_re_omega:.3g})")

    parts = np.stack(q_parts(surface.psi.values), axis=-1) / norms[..., None]
    axis, sign = POLES[pole]
    height = sign * parts[..., axis]
    others = [i for i in range(4) if i != axis]
    denom = 1.0 - height
    clamped = int(np.sum(np.abs(denom) < clamp_eps))
    denom = np.where(np.abs(denom) < clamp_eps,
                     np.where(denom >= 0, clamp_eps, -clamp_eps), denom)
    projected = parts[..., others] / denom[..., None]

    samples = surface.psi.samples
    vertices = projected.reshape(samples * samples, 3)
    faces = []
    degenerate = 0
    for i in range(samples):
        for j in range(samples):
            a = i * samples + j
            b = ((i + 1) % samples) * samples + j
            c = ((i + 1) % samples) * samples + (j + 1) % samples
            d = i * samples + (j + 1) % samples
            quad = (a + 1, b + 1, c + 1, d + 1)
            va, vb, vc, vd = (vertices[k - 1] for k in quad)
            area = 0.5 * (np.linalg.norm(np.cross(vb - va, vd - va))
                          + np.linalg.norm(np.cross(vd - vc, vb - vc)))
            if area < 1e-12:
                degenerate += 1
            faces.append(quad)
    return MeshResult(vertices=vertices, faces=faces, clamped=clamped,
                      degenerate_faces=degenerate)


def write_obj(mesh: MeshResult, path) -> None:
    with open(path, "w") as fh:
        fh.write("# quad mesh over a periodic surface grid\n")
        for v in mesh.vertices:
            fh.write("v %s %s %s\n" % tuple(format_float(c) for c in v))
        for face in mesh.faces:
            fh.write("f %d %d %d %d\n" % face)
