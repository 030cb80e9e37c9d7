"""Dependency-free log-log SVG line plots for sweep reports."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

__all__ = ["loglog_svg"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd")


def _decades(lo: float, hi: float) -> list[int]:
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def loglog_svg(
    x,
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: float = 640.0,
    height: float = 480.0,
) -> str:
    """Plot positive-valued series against x on log-log axes.

    series is a list of (label, values) pairs; nonpositive values are
    dropped point-wise (they have no log coordinate).
    """
    pts = []
    for _, ys in series:
        pts.extend(
            (float(a), float(b)) for a, b in zip(x, ys) if float(a) > 0 and float(b) > 0
        )
    if not pts:
        raise ValueError("nothing to plot: no positive data points")
    lx = [math.log10(a) for a, _ in pts]
    ly = [math.log10(b) for _, b in pts]
    x_lo, x_hi = min(lx), max(lx)
    y_lo, y_hi = min(ly), max(ly)
    if x_hi - x_lo < 1e-9:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi - y_lo < 1e-9:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    ml, mr, mt, mb = 70.0, 20.0, 40.0, 50.0
    pw, ph = width - ml - mr, height - mt - mb

    def px(v: float) -> float:
        return ml + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v: float) -> float:
        return mt + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="white"/>',
        f'<rect x="{ml:g}" y="{mt:g}" width="{pw:g}" height="{ph:g}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for d in _decades(x_lo, x_hi):
        if x_lo <= d <= x_hi:
            cx = px(d)
            out.append(
                f'<line x1="{cx:.2f}" y1="{mt:g}" x2="{cx:.2f}" y2="{mt + ph:g}" '
                'stroke="#dddddd" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{cx:.2f}" y="{mt + ph + 18:.2f}" font-size="11" '
                f'text-anchor="middle">1e{d}</text>'
            )
    for d in _decades(y_lo, y_hi):
        if y_lo <= d <= y_hi:
            cy = py(d)
            out.append(
                f'<line x1="{ml:g}" y1="{cy:.2f}" x2="{ml + pw:g}" y2="{cy:.2f}" '
                'stroke="#dddddd" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{ml - 6:.2f}" y="{cy + 4:.2f}" font-size="11" '
                f'text-anchor="end">1e{d}</text>'
            )
    for idx, (label, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        coords = [
            f"{px(math.log10(float(a))):.2f},{py(math.log10(float(b))):.2f}"
            for a, b in zip(x, ys)
            if float(a) > 0 and float(b) > 0
        ]
        if coords:
            out.append(
                f'<polyline points="{" ".join(coords)}" fill="none" '
                f'stroke="{color}" stroke-width="2"/>'
            )
        ly0 = mt + 16 + 16 * idx
        out.append(
            f'<line x1="{ml + pw - 150:.2f}" y1="{ly0:.2f}" x2="{ml + pw - 125:.2f}" '
            f'y2="{ly0:.2f}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{ml + pw - 120:.2f}" y="{ly0 + 4:.2f}" font-size="12">'
            f"{escape(str(label))}</text>"
        )
    if title:
        out.append(
            f'<text x="{width / 2:g}" y="22" font-size="15" text-anchor="middle">'
            f"{escape(title)}</text>"
        )
    if xlabel:
        out.append(
            f'<text x="{ml + pw / 2:g}" y="{height - 12:g}" font-size="12" '
            f'text-anchor="middle">{escape(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="18" y="{mt + ph / 2:g}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 18 {mt + ph / 2:g})">{escape(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
