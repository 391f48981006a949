"""Deterministic SVG figures for rank-one and rank-two inputs.

Rank one: one panel per support entry with the PL graph over the box, plus
one polygon figure per degeneration candidate.  Rank two: one figure per
support entry showing the box, its linearity cells, and vertex value
labels.  Output bytes are stable for a fixed input and matplotlib version:
the SVG hash salt is pinned and no timestamps are embedded.
"""

from __future__ import annotations

import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "tfk"

import matplotlib.pyplot as plt

from . import degen as dg
from . import divpol as dp
from . import exactgeom as eg
from .divpol import DivisorialPolytope, ProjPoint
from .errors import UnsupportedDimension

_METADATA = {"Date": None}


def _slug(p: ProjPoint) -> str:
    return str(p).replace("/", "_").replace("-", "m")


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata=_METADATA)
    plt.close(fig)


def render_entry_graphs_1d(psi: DivisorialPolytope, outdir: str) -> list[str]:
    lo = min(v[0] for v in psi.box.vertices)
    hi = max(v[0] for v in psi.box.vertices)
    points = [p for p in dp.support(psi)]
    fig, axes = plt.subplots(1, max(len(points), 1), figsize=(3.2 * max(len(points), 1), 3))
    if len(points) <= 1:
        axes = [axes]
    for ax, p in zip(axes, points):
        f = dp.canonicalize(psi.entry(p))
        xs = sorted({lo, hi} | {cell.vertices[0][0] for cell, _ in dp.linearity_cells(f)}
                    | {cell.vertices[-1][0] for cell, _ in dp.linearity_cells(f)})
        ys = [dp.evaluate(f, (x,)) for x in xs]
        ax.plot([float(x) for x in xs], [float(y) for y in ys], marker="o")
        ax.set_title(f"psi at {p}")
        ax.axhline(0.0, linewidth=0.5, color="gray")
        ax.grid(True, linewidth=0.3)
    path = os.path.join(outdir, "psi_graphs.svg")
    fig.tight_layout()
    _save(fig, path)
    return [path]


def render_candidate_polygon(candidate, outdir: str) -> str:
    delta = candidate.delta
    if delta.dim != 2:
        raise UnsupportedDimension("candidate polygons are drawn for rank-one input only")
    cyc = eg._monotone_chain(list(delta.vertices))
    xs = [float(v[0]) for v in cyc] + [float(cyc[0][0])]
    ys = [float(v[1]) for v in cyc] + [float(cyc[0][1])]
    fig, ax = plt.subplots(figsize=(3.2, 3.2))
    ax.fill(xs, ys, alpha=0.3)
    ax.plot(xs, ys, marker="o")
    ux, uy = float(candidate.u_q[0]), float(candidate.u_q[1])
    ax.plot([ux], [uy], marker="x", color="red")
    ax.set_title(f"fiber polytope at {candidate.q}")
    ax.grid(True, linewidth=0.3)
    ax.set_aspect("equal")
    path = os.path.join(outdir, f"delta_{_slug(candidate.q)}.svg")
    fig.tight_layout()
    _save(fig, path)
    return path


def render_cells_2d(psi: DivisorialPolytope, outdir: str) -> list[str]:
    paths = []
    for p in dp.support(psi):
        f = dp.canonicalize(psi.entry(p))
        fig, ax = plt.subplots(figsize=(3.6, 3.6))
        for cell, piece in dp.linearity_cells(f):
            cyc = eg._monotone_chain(list(cell.vertices))
            xs = [float(v[0]) for v in cyc] + [float(cyc[0][0])]
            ys = [float(v[1]) for v in cyc] + [float(cyc[0][1])]
            ax.fill(xs, ys, alpha=0.25)
            ax.plot(xs, ys, linewidth=0.8, color="black")
            for v in cell.vertices:
                val = dp.evaluate(f, v)
                ax.annotate(str(val), (float(v[0]), float(v[1])), fontsize=7)
        ax.set_title(f"linearity cells at {p}")
        ax.grid(True, linewidth=0.3)
        ax.set_aspect("equal")
        path = os.path.join(outdir, f"psi_cells_{_slug(p)}.svg")
        fig.tight_layout()
        _save(fig, path)
        paths.append(path)
    return paths


def render_svg(psi: DivisorialPolytope, outdir: str, candidates=None) -> list[str]:
    """Write the figure set for a document; returns the created paths."""
    os.makedirs(outdir, exist_ok=True)
    if psi.dim == 1:
        paths = render_entry_graphs_1d(psi, outdir)
        for c in candidates or ():
            paths.append(render_candidate_polygon(c, outdir))
        return paths
    if psi.dim == 2:
        return render_cells_2d(psi, outdir)
    raise UnsupportedDimension(f"figures support rank 1 and 2, not {psi.dim}")
