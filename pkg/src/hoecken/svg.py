"""Self-contained SVG heatmap writer.

Plain-text vector output with axes, a colorbar legend, and gray cells for
infeasible points; no plotting stack involved. Output is deterministic for
identical inputs.
"""

from __future__ import annotations

import math
from typing import Sequence

_STOPS = (
    (0.267, 0.005, 0.329),
    (0.229, 0.322, 0.546),
    (0.128, 0.567, 0.551),
    (0.369, 0.789, 0.383),
    (0.993, 0.906, 0.144),
)
_INFEASIBLE_FILL = "#bbbbbb"

_MARGIN_LEFT = 70
_MARGIN_RIGHT = 90
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 55
_PLOT_W = 440
_PLOT_H = 360


def _color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    pos = t * (len(_STOPS) - 1)
    i = min(int(pos), len(_STOPS) - 2)
    frac = pos - i
    r, g, b = (a + frac * (c - a) for a, c in zip(_STOPS[i], _STOPS[i + 1]))
    return "#{:02x}{:02x}{:02x}".format(
        int(round(r * 255)), int(round(g * 255)), int(round(b * 255)))


def heatmap_svg(title: str, x_label: str, y_label: str,
                xs: Sequence[float], ys: Sequence[float],
                grid: Sequence[Sequence[float]],
                comment: str = "") -> str:
    """Render a value grid as an SVG heatmap.

    grid[i][j] is the value at ys[i], xs[j]; NaN cells are drawn gray.
    """
    if len(grid) != len(ys) or any(len(row) != len(xs) for row in grid):
        raise ValueError("grid shape must be len(ys) x len(xs)")
    finite = [v for row in grid for v in row if not math.isnan(v)]
    lo = min(finite) if finite else 0.0
    hi = max(finite) if finite else 1.0
    span = hi - lo if hi > lo else 1.0

    width = _MARGIN_LEFT + _PLOT_W + _MARGIN_RIGHT
    height = _MARGIN_TOP + _PLOT_H + _MARGIN_BOTTOM
    cw = _PLOT_W / len(xs)
    ch = _PLOT_H / len(ys)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if comment:
        out.append(f"<!-- {comment} -->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">')
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    out.append(
        f'<text x="{_MARGIN_LEFT + _PLOT_W / 2:.1f}" y="22" '
        f'text-anchor="middle" font-family="sans-serif" font-size="14">'
        f'{title}</text>')

    # Cells: row 0 at the bottom so both axes increase in the usual sense.
    for i, row in enumerate(grid):
        y = _MARGIN_TOP + _PLOT_H - (i + 1) * ch
        for j, v in enumerate(row):
            x = _MARGIN_LEFT + j * cw
            fill = _INFEASIBLE_FILL if math.isnan(v) else _color((v - lo) / span)
            out.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw:.2f}" '
                f'height="{ch:.2f}" fill="{fill}"/>')

    # Frame and axis labels.
    out.append(
        f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{_PLOT_W}" '
        f'height="{_PLOT_H}" fill="none" stroke="black" stroke-width="1"/>')
    out.append(
        f'<text x="{_MARGIN_LEFT + _PLOT_W / 2:.1f}" y="{height - 15}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">'
        f'{x_label}</text>')
    out.append(
        f'<text x="18" y="{_MARGIN_TOP + _PLOT_H / 2:.1f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + _PLOT_H / 2:.1f})">'
        f'{y_label}</text>')
    for value, anchor, x in ((xs[0], "start", _MARGIN_LEFT),
                             (xs[-1], "end", _MARGIN_LEFT + _PLOT_W)):
        out.append(
            f'<text x="{x}" y="{_MARGIN_TOP + _PLOT_H + 16}" '
            f'text-anchor="{anchor}" font-family="sans-serif" '
            f'font-size="11">{value:g}</text>')
    for value, y in ((ys[0], _MARGIN_TOP + _PLOT_H),
                     (ys[-1], _MARGIN_TOP + 10)):
        out.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{y}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{value:g}</text>')

    # Colorbar legend.
    bar_x = _MARGIN_LEFT + _PLOT_W + 25
    n_bar = 32
    bh = _PLOT_H / n_bar
    for k in range(n_bar):
        t = (k + 0.5) / n_bar
        y = _MARGIN_TOP + _PLOT_H - (k + 1) * bh
        out.append(
            f'<rect x="{bar_x}" y="{y:.2f}" width="16" height="{bh:.2f}" '
            f'fill="{_color(t)}"/>')
    out.append(
        f'<rect x="{bar_x}" y="{_MARGIN_TOP}" width="16" height="{_PLOT_H}" '
        f'fill="none" stroke="black" stroke-width="0.5"/>')
    out.append(
        f'<text x="{bar_x + 20}" y="{_MARGIN_TOP + _PLOT_H}" '
        f'font-family="sans-serif" font-size="11">{lo:.4g}</text>')
    out.append(
        f'<text x="{bar_x + 20}" y="{_MARGIN_TOP + 10}" '
        f'font-family="sans-serif" font-size="11">{hi:.4g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
