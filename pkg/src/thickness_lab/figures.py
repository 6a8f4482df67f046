"""Deterministic matplotlib renderings of graphs, instances, and partitions.

Layouts are arithmetic (circular / two-row), never force-directed, so the
same input always produces the same bytes.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .graph import Graph
from .reduction import ReducedInstance
from .solver import EdgePartition

_PART_COLORS = ["tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple", "tab:brown"]


def _circle(n: int, cx: float = 0.0, cy: float = 0.0, r: float = 1.0) -> list[tuple[float, float]]:
    if n == 1:
        return [(cx, cy)]
    return [
        (cx + r * math.cos(2 * math.pi * i / n - math.pi / 2), cy + r * math.sin(2 * math.pi * i / n - math.pi / 2))
        for i in range(n)
    ]


def _draw_nodes(ax, pos: Sequence[tuple[float, float]], labels: bool = True, emphasize: Sequence[int] = ()) -> None:
    emph = set(emphasize)
    for v, (x, y) in enumerate(pos):
        face = "gold" if v in emph else "white"
        ax.scatter([x], [y], s=260, zorder=3, facecolors=face, edgecolors="black")
        if labels:
            ax.text(x, y, str(v), ha="center", va="center", fontsize=8, zorder=4)


def save_graph_png(
    g: Graph,
    path: Union[str, Path],
    *,
    title: Optional[str] = None,
    edge_colors: Optional[Sequence[str]] = None,
) -> None:
    pos = _circle(max(g.n, 1))
    fig, ax = plt.subplots(figsize=(4, 4))
    for eid, (u, v) in enumerate(g.edges):
        color = edge_colors[eid] if edge_colors else "black"
        ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]], color=color, zorder=1, linewidth=1.4)
    if g.n:
        _draw_nodes(ax, pos[: g.n])
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)


def save_partition_png(g: Graph, partition: EdgePartition, path: Union[str, Path], *, title: Optional[str] = None) -> None:
    colors = [_PART_COLORS[(p - 1) % len(_PART_COLORS)] for p in partition.assign]
    save_graph_png(g, path, title=title, edge_colors=colors)


def save_instance_png(inst: ReducedInstance, path: Union[str, Path], *, title: Optional[str] = None) -> None:
    """Source nodes on the bottom row, gadget nodes on the top row, dashed connectors."""
    n_src = inst.source.n
    n_gad = inst.gadget.h.n
    pos: list[tuple[float, float]] = []
    for i in range(n_src):
        pos.append((i - (n_src - 1) / 2, 0.0))
    for j in range(n_gad):
        pos.append((j - (n_gad - 1) / 2, 2.0))
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * max(n_src, n_gad)), 4))
    style = {"source": dict(color="black", linewidth=1.6, linestyle="-"),
             "gadget": dict(color="gray", linewidth=1.2, linestyle="-"),
             "connector": dict(color="tab:blue", linewidth=1.0, linestyle="--")}
    for (u, v), org in zip(inst.gprime.edges, inst.edge_origin):
        (x1, y1), (x2, y2) = pos[u], pos[v]
        if org.kind == "source" and abs(x2 - x1) > 1.5:
            # bow long same-row edges so they stay distinguishable
            mid = ((x1 + x2) / 2, y1 - 0.3 * abs(x2 - x1) ** 0.5)
            ax.plot([x1, mid[0], x2], [y1, mid[1], y2], **style[org.kind], zorder=1)
        else:
            ax.plot([x1, x2], [y1, y2], **style[org.kind], zorder=1)
    _draw_nodes(ax, pos, emphasize=inst.w_nodes)
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
