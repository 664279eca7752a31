"""Minimal hand-emitted SVG charts: line/scatter plots and heatmaps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from html import escape
from typing import Sequence

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 55
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str = ""
    lines: bool = True
    markers: bool = True
    hollow: Sequence[bool] = field(default_factory=list)


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        return [10.0**k for k in range(a, b + 1) if lo <= 10.0**k <= hi] or [lo, hi]
    span = hi - lo or 1.0
    step = 10 ** math.floor(math.log10(span / 5))
    for m in (1, 2, 5, 10):
        if span / (m * step) <= 6:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def _fmt(v: float) -> str:
    return f"{v:.3g}"


def plot(
    series: Sequence[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
) -> str:
    """Line/scatter chart; points with nonpositive coordinates on log axes are dropped."""
    pts = []
    for s in series:
        for x, y in zip(s.x, s.y):
            if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0):
                pts.append((x, y))
    if not pts:
        pts = [(1.0, 1.0)]
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    xs = [tx(x) for x, _ in pts]
    ys = [ty(y) for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad_x, pad_y = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def X(v):
        return _ML + (tx(v) - x0) / (x1 - x0) * pw

    def Y(v):
        return _MT + ph - (ty(v) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
        f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{_ML + pw / 2}" y="{_H - 12}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" transform="rotate(-90 16 {_MT + ph / 2})">{escape(ylabel)}</text>',
    ]
    inv_x = (lambda v: 10**v) if logx else (lambda v: v)
    inv_y = (lambda v: 10**v) if logy else (lambda v: v)
    for t in _ticks(inv_x(x0), inv_x(x1), logx):
        px = X(t)
        out.append(f'<line x1="{px:.1f}" y1="{_MT + ph}" x2="{px:.1f}" y2="{_MT + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{px:.1f}" y="{_MT + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(inv_y(y0), inv_y(y1), logy):
        py = Y(t)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" y2="{py:.1f}" stroke="#333"/>')
        out.append(f'<text x="{_ML - 8}" y="{py + 4:.1f}" text-anchor="end">{_fmt(t)}</text>')
    for k, s in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        hollow = list(s.hollow) + [False] * len(s.x)
        keep = [
            (x, y, h) for x, y, h in zip(s.x, s.y, hollow)
            if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0)
        ]
        if s.lines and len(keep) > 1:
            d = " ".join(f"{'M' if i == 0 else 'L'}{X(x):.1f},{Y(y):.1f}" for i, (x, y, _) in enumerate(keep))
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if s.markers:
            for x, y, h in keep:
                fill = "white" if h else color
                out.append(f'<circle cx="{X(x):.1f}" cy="{Y(y):.1f}" r="3.5" fill="{fill}" stroke="{color}"/>')
        if s.label:
            ly = _MT + 16 + 16 * k
            out.append(f'<rect x="{_ML + 10}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{_ML + 26}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap(
    values: Sequence[Sequence[float]],
    row_labels: Sequence[str],
    col_labels: Sequence[str],
    title: str = "",
) -> str:
    """Cell grid shaded by ``log10`` of the value; non-finite cells are hatched grey."""
    rows, cols = len(values), len(values[0]) if values else 0
    finite = [v for row in values for v in row if v is not None and math.isfinite(v) and v > 0]
    lo = math.log10(min(finite)) if finite else 0.0
    hi = math.log10(max(finite)) if finite else 1.0
    hi = hi if hi > lo else lo + 1.0
    cw = (_W - _ML - _MR) / max(cols, 1)
    ch = (_H - _MT - _MB) / max(rows, 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" font-family="sans-serif" font-size="12">',
        f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for i, row in enumerate(values):
        for j, v in enumerate(row):
            x, y = _ML + j * cw, _MT + i * ch
            if v is None or not math.isfinite(v) or v <= 0:
                fill, text = "#bbbbbb", "n/a"
            else:
                f = (math.log10(v) - lo) / (hi - lo)
                fill = f"rgb({int(255 * f)},{int(80 + 100 * (1 - f))},{int(255 * (1 - f))})"
                text = _fmt(v)
            out.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{cw:.1f}" height="{ch:.1f}" fill="{fill}" stroke="white"/>')
            out.append(f'<text x="{x + cw / 2:.1f}" y="{y + ch / 2 + 4:.1f}" text-anchor="middle">{text}</text>')
    for i, lab in enumerate(row_labels):
        out.append(f'<text x="{_ML - 6}" y="{_MT + (i + 0.5) * ch + 4:.1f}" text-anchor="end">{escape(lab)}</text>')
    for j, lab in enumerate(col_labels):
        out.append(f'<text x="{_ML + (j + 0.5) * cw:.1f}" y="{_H - _MB + 18}" text-anchor="middle">{escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["Series", "plot", "heatmap"]
