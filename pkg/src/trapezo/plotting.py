"""Static figures: the projection seen from infinity and 2-D region slices."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.patches import Circle, Patch, Polygon

from .geometry import Trapezohedron

KIND_COLORS = ("#4c9f70", "#e0b040", "#c0504d")
KIND_LABELS = ("interior", "boundary", "exterior")


def _label(ax, xy, text, color):
    ax.plot(*xy, "o", color=color, ms=3)
    ax.annotate(text, xy, xytext=(3, 3), textcoords="offset points", fontsize=7, color=color)


def plot_projection(trap: Trapezohedron, path, title: str | None = None, fmt: str | None = None):
    """Draw rectangle, circles C_i and the points O, P_i, Q_i, R_i, S_i.

    Holed edges Q_iP_{i+1} are drawn dashed.  Coordinates are y-up in units
    of the first half-extent.
    """
    proj = trap.projection
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.add_patch(Polygon(proj.P, closed=True, fill=False, lw=1.2, color="k"))
    for i in range(4):
        ax.add_patch(Circle(proj.R[i], proj.radii[i], fill=False, lw=0.8, color="C0", alpha=0.7))
    holed = proj.holed()
    for i in range(4):
        j = (i + 1) % 4
        seg = np.array([proj.Q[i], proj.P[j]])
        if holed[i]:
            ax.plot(*seg.T, ls="--", lw=2, color="C3")
        ax.plot(*np.array([[0.0, 0.0], proj.S[i]]).T, lw=0.5, color="0.6")
        _label(ax, proj.P[i], f"P{i + 1}", "k")
        _label(ax, proj.Q[i], f"Q{i + 1}", "C3" if holed[i] else "C2")
        _label(ax, proj.R[i], f"R{i + 1}", "C0")
        _label(ax, proj.S[i], f"S{i + 1}", "C4")
    _label(ax, (0.0, 0.0), "O", "k")
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title or "c = (" + ", ".join(f"{c:.4g}" for c in trap.cosines) + ")", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, format=fmt)
    plt.close(fig)


def plot_slice(free, xs, ys, kinds, path, marks=(), fmt: str | None = None):
    """Heatmap of classification kinds over a cosine slice.

    ``kinds`` is indexed ``[ix, iy]`` with codes 0/1/2.  ``marks`` is an
    iterable of ``(x, y, label)`` points to annotate.
    """
    fig, ax = plt.subplots(figsize=(5.5, 5))
    dx = (xs[-1] - xs[0]) / max(len(xs) - 1, 1) if len(xs) > 1 else 2.0
    dy = (ys[-1] - ys[0]) / max(len(ys) - 1, 1) if len(ys) > 1 else 2.0
    extent = (xs[0] - dx / 2, xs[-1] + dx / 2, ys[0] - dy / 2, ys[-1] + dy / 2)
    ax.imshow(np.asarray(kinds).T, origin="lower", extent=extent,
              cmap=ListedColormap(KIND_COLORS), vmin=0, vmax=2, interpolation="nearest")
    for x, y, text in marks:
        ax.plot(x, y, "k+")
        ax.annotate(text, (x, y), xytext=(4, 4), textcoords="offset points", fontsize=8)
    ax.set_xlabel(f"c{free[0]}")
    ax.set_ylabel(f"c{free[1]}")
    ax.legend(handles=[Patch(color=c, label=l) for c, l in zip(KIND_COLORS, KIND_LABELS)],
              loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format=fmt)
    plt.close(fig)
