"""Figure rendering for the report paths (scan and verify).

Figures are written next to the delimited output with a fixed style and
fixed PNG metadata so repeated runs stay byte-identical.
"""

from __future__ import annotations

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .quaternion import q_norm, q_real, q_symplectic  # noqa: E402
from .surface import SurfaceGrid, connection_form, fundamental_form  # noqa: E402

_SAVE_KWARGS = dict(dpi=150, bbox_inches="tight",
                    metadata={"Software": "hsltori"})

plt.rcParams.update({
    "font.size": 9,
    "axes.linewidth": 0.8,
    "figure.figsize": (7.0, 4.5),
})


def render_scan_figure(scan, path) -> None:
    """Traces and trace discriminant over the unit circle, zeros marked."""
    phis = scan.phis
    g0 = np.array([s.g0.real for s in scan.samples])
    g1 = np.array([s.g1.real for s in scan.samples])
    disc = np.array([abs(s.disc0) for s in scan.samples])

    fig, (ax0, ax1) = plt.subplots(2, 1, sharex=True)
    ax0.plot(phis, g0, color="tab:blue", lw=1.2, label="g0")
    ax0.plot(phis, g1, color="tab:orange", lw=1.2, label="g1")
    ax0.axhline(2.0, color="gray", lw=0.6, ls="--")
    ax0.axhline(-2.0, color="gray", lw=0.6, ls="--")
    ax0.set_ylabel("holonomy trace")
    ax0.legend(loc="upper right", frameon=False)

    ax1.semilogy(phis, np.maximum(disc, 1e-18), color="tab:green", lw=1.0)
    for z in scan.zeros:
        ax1.axvline(z.phi, color="tab:red", lw=0.8, alpha=0.7)
    ax1.set_xlabel("phi  (eta = exp(i phi))")
    ax1.set_ylabel("|g0^2 - 4|")
    am = scan.am
    ax0.set_title(f"spectral scan: r={am.r}, s={am.s}, "
                  f"delta={am.lattice.delta0:g}+{am.lattice.delta1:g}i, "
                  f"{len(scan.zeros)} zeros")
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def render_surface_figure(surface: SurfaceGrid, path, title: str = "") -> None:
    """Residual maps of a sampled surface: sphere, Lagrangian, conformality."""
    norms = q_norm(surface.psi.values)
    form = connection_form(surface)
    re_omega = np.maximum(np.abs(q_real(form.omega.cx.values)),
                          np.abs(q_real(form.omega.cy.values)))
    fx, fy = surface.partials()
    pullback = np.abs(q_symplectic(fx.values, fy.values))
    ff = fundamental_form(surface)
    eg_gap = np.abs(ff.E.values - ff.G.values)

    panels = [
        (np.abs(norms - norms.mean()), "| |psi| - mean |"),
        (re_omega, "max |Re omega| slot"),
        (pullback, "|Theta(psi_x, psi_y)|"),
        (eg_gap, "|E - G|"),
    ]
    fig, axes = plt.subplots(2, 2, figsize=(7.5, 6.0))
    extent = [0, surface.covering, 0, surface.covering]
    for ax, (data, label) in zip(axes.flat, panels):
        im = ax.imshow(data.T, origin="lower", extent=extent, cmap="viridis")
        ax.set_title(label)
        fig.colorbar(im, ax=ax, shrink=0.85)
    if title:
        fig.suptitle(title)
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
