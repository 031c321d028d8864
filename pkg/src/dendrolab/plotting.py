"""Matplotlib figures written as byte-stable SVG."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from .space import TreeNode  # noqa: E402

STYLE = {
    "svg.hashsalt": "dendrolab",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (6.0, 3.6),
}


def log10(v) -> float:
    """log10 of a positive int or Fraction of any size."""
    if isinstance(v, Fraction):
        return math.log10(v.numerator) - math.log10(v.denominator)
    return math.log10(v)


def save_svg(fig, path: str) -> str:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def density_figure(checkpoints: Sequence[int], ratios: Sequence[Fraction], running: Sequence[Fraction], path: str):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        xs = [log10(n) for n in checkpoints]
        ax.plot(xs, [log10(q) if q else float("nan") for q in ratios], "o-", label="ratio")
        ax.plot(xs, [log10(q) if q else float("nan") for q in running], "s--", label="running min")
        ax.set_xlabel("log10 n")
        ax.set_ylabel("log10 |N(x,U0) before n| / n")
        ax.legend(frameon=False)
        return save_svg(fig, path)


def complexity_figure(ns: Sequence[int], h: Sequence[float], path: str):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(ns, h, "o-")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("word length n")
        ax.set_ylabel("ln W(n) / n")
        return save_svg(fig, path)


def events_figure(events: Sequence[int], horizon: int, title: str, path: str):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 1.8))
        ax.vlines([math.log10(1 + e) for e in events], 0, 1, linewidth=0.8)
        ax.set_xlim(0, math.log10(1 + horizon))
        ax.set_yticks([])
        ax.set_xlabel("log10 (1 + n)")
        ax.set_title(title)
        return save_svg(fig, path)


def trace_figure(times: Sequence[int], heights: Sequence[Optional[int]], path: str):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ys = [float("nan") if h is None else math.log10(1 + h) for h in heights]
        ax.step(times, ys, where="post")
        ax.set_xlabel("n")
        ax.set_ylabel("log10 (1 + height)")
        return save_svg(fig, path)


def dendrite_figure(nodes: List[TreeNode], branches: int, highlight: Sequence[Tuple[int, ...]], path: str):
    """Radial drawing: subdendrite E_j in colour j, hubs sized by budget.

    Angles come from the truncation layout; radii are drawn as sqrt(distance to o)
    so deep levels stay visible.
    """
    def warp(n: TreeNode) -> Tuple[float, float]:
        r = math.hypot(n.x, n.y)
        k = r ** -0.5 if r > 0 else 0.0
        return n.x * k, n.y * k

    pos: Dict[Tuple[int, ...], Tuple[float, float]] = {n.prefix: warp(n) for n in nodes}
    cmap = plt.get_cmap("tab10")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 6.0))
        segs, cols = [], []
        for n in nodes:
            if n.prefix:
                segs.append([pos[n.prefix[:-1]], pos[n.prefix]])
                cols.append(cmap(n.prefix[0] % 10))
        if segs:
            ax.add_collection(LineCollection(segs, colors=cols, linewidths=0.6))
        xs = [pos[n.prefix][0] for n in nodes]
        ys = [pos[n.prefix][1] for n in nodes]
        sizes = [max(0.5, 60 * float(n.budget) ** 0.5) for n in nodes]
        colors = ["black" if not n.prefix else cmap(n.prefix[0] % 10) for n in nodes]
        ax.scatter(xs, ys, s=sizes, c=colors, zorder=3, linewidths=0)
        ax.annotate("o", (0, 0), xytext=(4, 4), textcoords="offset points")
        for j in range(branches):
            if (j,) in pos:
                x, y = pos[(j,)]
                ax.annotate("E%d" % j, (x, y), xytext=(3, -9), textcoords="offset points", color=cmap(j % 10))
        marked = [pos[p] for p in highlight if p in pos]
        if marked:
            ax.scatter([m[0] for m in marked], [m[1] for m in marked], s=40, facecolors="none",
                       edgecolors="red", linewidths=1.0, zorder=4)
        lim = max([abs(v) for v in xs + ys] + [0.05]) * 1.15
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
        ax.set_aspect("equal")
        ax.axis("off")
        return save_svg(fig, path)
