"""Matplotlib rendering of plumbing graphs and batch reports.

Figures are deterministic for fixed inputs: the layout is a fixed
circular embedding ordered by vertex id (no randomized force layout),
and PNG metadata that varies between runs is stripped.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["draw_plumbing", "render_roundtrip_figure"]

_PNG_METADATA = {"Software": None}


def _positions(graph):
    ids = sorted(graph.vertex_ids)
    n = len(ids)
    pos = {}
    for k, vid in enumerate(ids):
        angle = 2 * math.pi * k / max(n, 1)
        pos[vid] = (math.cos(angle), math.sin(angle))
    return pos


def draw_plumbing(graph, path, title=None):
    """Render a plumbing graph to an image file.

    Vertices are labeled e[,g]; negative edges are dashed; arrowheads are
    drawn as small open markers outside the circle.
    """
    pos = _positions(graph)
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.set_aspect("equal")
    ax.axis("off")
    drawn = {}
    for u, v, s in graph.edges:
        style = "-" if s > 0 else "--"
        if u == v:
            x, y = pos[u]
            loop = plt.Circle((x * 1.12, y * 1.12), 0.08, fill=False, linestyle=style, color="black")
            ax.add_patch(loop)
            continue
        (x1, y1), (x2, y2) = pos[u], pos[v]
        count = drawn.get((u, v), 0)
        drawn[(u, v)] = count + 1
        # bow parallel edges apart
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        nx, ny = -(y2 - y1), (x2 - x1)
        norm = math.hypot(nx, ny) or 1.0
        off = 0.06 * count * (-1) ** count
        bow_x, bow_y = mx + off * nx / norm, my + off * ny / norm
        ax.plot([x1, bow_x, x2], [y1, bow_y, y2], style, color="black", linewidth=1)
    for a, v in graph.arrowheads:
        x, y = pos[v]
        ax.plot([x, x * 1.25], [y, y * 1.25], "-", color="gray", linewidth=1)
        ax.plot([x * 1.25], [y * 1.25], marker=">", color="gray")
    for vid, e, g in sorted(graph.vertices):
        x, y = pos[vid]
        label = f"{e}" if g == 0 else f"{e},[{g}]"
        ax.plot([x], [y], "o", color="tab:red" if e <= -2 else "black", markersize=6)
        ax.annotate(label, (x, y), textcoords="offset points", xytext=(6, 6), fontsize=8)
    if title:
        ax.set_title(title)
    lim = 1.45
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)


def render_roundtrip_figure(rows, path):
    """Bar chart of normalization move counts per round-trip instance.

    ``rows`` are (key, class string, moves, matches) tuples in report
    order; bars for mismatches are drawn hollow.
    """
    rows = list(rows)
    fig_height = max(2.0, 0.28 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(8, fig_height))
    labels = [f"{key}  [{cls}]" for key, cls, _, _ in rows]
    moves = [m for _, _, m, _ in rows]
    colors = ["tab:blue" if ok else "white" for _, _, _, ok in rows]
    edgecolors = ["tab:blue" if ok else "tab:red" for _, _, _, ok in rows]
    y = range(len(rows))
    ax.barh(y, moves, color=colors, edgecolor=edgecolors)
    ax.set_yticks(list(y))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("normalization moves")
    ax.set_title("boundary round trips")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
