"""Figure rendering for reports.  Everything goes through the Agg backend and
writes files; nothing here opens a window.  SVG output is deterministic
(fixed hash salt, no embedded date) so repeated runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams["svg.hashsalt"] = "capmarkov"

_SVG_METADATA = {"Date": None}


def _save(fig, path: str) -> str:
    path = str(path)
    if path.endswith(".svg"):
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    else:
        fig.savefig(path)
    plt.close(fig)
    return path


def plot_components(comps, path: str, title: str | None = None) -> str:
    """Boundary curves of lemniscate components with their enclosed zeros."""
    fig, ax = plt.subplots(figsize=(6, 6))
    cmap = plt.get_cmap("tab10")
    for comp in comps:
        color = cmap(comp.label % 10)
        for branch in comp.boundary:
            closed = np.append(branch, branch[0])
            ax.plot(closed.real, closed.imag, "-", color=color, lw=1.0,
                    label=f"component {comp.label}")
        zs = np.asarray(comp.zeros_inside)
        if zs.size:
            ax.plot(zs.real, zs.imag, "x", color=color, ms=8)
    handles, labels = ax.get_legend_handles_labels()
    seen = dict(zip(labels, handles))
    if seen:
        ax.legend(seen.values(), seen.keys(), loc="upper right", fontsize=8)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_capacity_points(candidates, chosen, path: str, title: str | None = None) -> str:
    """Candidate boundary cloud with the selected extremal configuration."""
    fig, ax = plt.subplots(figsize=(6, 6))
    cand = np.asarray(candidates)
    ax.plot(cand.real, cand.imag, ".", color="0.75", ms=2, label="candidates")
    if chosen is not None:
        sel = np.asarray(chosen)
        ax.plot(sel.real, sel.imag, "o", color="C3", ms=5, mfc="none",
                label=f"selected n={len(sel)}")
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_sweep(result, path: str) -> str:
    """Quotients by degree; the sharp line sits at 1."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    rng = np.random.default_rng(0)
    for d in result.degrees:
        qs = [c.quotient for c in result.cases if c.degree == d]
        x = d + rng.uniform(-0.15, 0.15, len(qs))
        ax.plot(x, qs, ".", ms=3, alpha=0.5, label=f"d={d}")
    ax.axhline(1.0, color="k", lw=1.0)
    ax.set_xlabel("degree")
    ax.set_ylabel("quotient")
    ax.set_title(f"{result.n_polynomials} random monic polynomials, "
                 f"{len(result.failures)} failures")
    ax.legend(loc="lower right", fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_deformation(grid, path: str, report=None) -> str:
    """Heatmap of F(lambda); masked lattice points stay blank."""
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    F = np.ma.masked_invalid(grid.F)
    extent = (grid.center.real - grid.radius, grid.center.real + grid.radius,
              grid.center.imag - grid.radius, grid.center.imag + grid.radius)
    im = ax.imshow(F, origin="lower", extent=extent, cmap="viridis",
                   interpolation="nearest")
    fig.colorbar(im, ax=ax, label="F(lambda)")
    if report is not None and report.violations:
        pts = np.array([v["lambda"] for v in report.violations])
        ax.plot(pts[:, 0], pts[:, 1], "rx", ms=6, label="violations")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title("log(cap * sup |f'|) over the shift family")
    return _save(fig, path)
