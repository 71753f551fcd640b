"""Minimal dependency-free SVG line and marker charts.

Output is a pure function of the input data (fixed 800x600 viewBox, fixed
number formatting, no timestamps), so identical data gives identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 80, 50, 70
MAX_POINTS = 2000

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    color: str | None = None
    marker: str | None = None  # None, "circle" or "cross"
    line: bool = True
    right_axis: bool = False


def nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    """Round tick values covering [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return [0.0]
    if hi - lo <= 0:
        pad = abs(lo) * 0.1 or 1.0
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / max(n, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    if ticks[-1] < hi:
        ticks.append(round(v, 12))
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.6g}"


def _decimate(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) > MAX_POINTS:
        stride = int(math.ceil(len(x) / MAX_POINTS))
        idx = np.arange(0, len(x), stride)
        if idx[-1] != len(x) - 1:
            idx = np.append(idx, len(x) - 1)
        x, y = x[idx], y[idx]
    return x, y


class _Scale:
    def __init__(self, lo, hi, a, b):
        self.ticks = nice_ticks(lo, hi)
        self.lo, self.hi = self.ticks[0], self.ticks[-1]
        self.a, self.b = a, b

    def __call__(self, v):
        return self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)


def _extent(values):
    vals = np.concatenate([np.asarray(v, dtype=float).ravel() for v in values]) if values else np.zeros(1)
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        return 0.0, 1.0
    return float(vals.min()), float(vals.max())


def chart(
    series: list[Series],
    title: str,
    xlabel: str,
    ylabel: str,
    ylabel_right: str | None = None,
) -> str:
    """Render ``series`` to an SVG document string."""
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
    left = [s for s in series if not s.right_axis]
    right = [s for s in series if s.right_axis]
    xs = _Scale(*_extent([s.x for s in series]), x0, x1)
    ys = _Scale(*_extent([s.y for s in left]), y0, y1)
    yr = _Scale(*_extent([s.y for s in right]), y0, y1) if right else None

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>',
    ]
    for t in xs.ticks:
        px = _fmt(xs(t))
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y1}" stroke="#dddddd"/>')
        out.append(f'<text x="{px}" y="{y0 + 20}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in ys.ticks:
        py = _fmt(ys(t))
        out.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        out.append(f'<line x1="{x0}" y1="{py}" x2="{x1}" y2="{py}" stroke="#dddddd"/>')
        out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">{_tick_label(t)}</text>')
    if yr is not None:
        for t in yr.ticks:
            py = _fmt(yr(t))
            out.append(f'<line x1="{x1}" y1="{py}" x2="{x1 + 5}" y2="{py}" stroke="black"/>')
            out.append(f'<text x="{x1 + 8}" y="{py}" dominant-baseline="middle">{_tick_label(t)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 20}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="20" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {(y0 + y1) / 2:.0f})">{escape(ylabel)}</text>'
    )
    if ylabel_right and yr is not None:
        xr = WIDTH - 20
        out.append(
            f'<text x="{xr}" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
            f'transform="rotate(90 {xr} {(y0 + y1) / 2:.0f})">{escape(ylabel_right)}</text>'
        )

    for i, s in enumerate(series):
        color = s.color or PALETTE[i % len(PALETTE)]
        scale_y = yr if s.right_axis else ys
        x, y = _decimate(s.x, s.y)
        pts = [(_fmt(xs(a)), _fmt(scale_y(b))) for a, b in zip(x, y) if math.isfinite(a) and math.isfinite(b)]
        if s.line and len(pts) > 1:
            path = " ".join(f"{a},{b}" for a, b in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        for a, b in pts if s.marker else ():
            if s.marker == "circle":
                out.append(f'<circle cx="{a}" cy="{b}" r="5" fill="none" stroke="{color}" stroke-width="1.5"/>')
            else:
                fa, fb = float(a), float(b)
                out.append(
                    f'<path d="M{fa - 5:.2f},{fb - 5:.2f}L{fa + 5:.2f},{fb + 5:.2f}'
                    f'M{fa - 5:.2f},{fb + 5:.2f}L{fa + 5:.2f},{fb - 5:.2f}" stroke="{color}" stroke-width="1.5"/>'
                )
        ly = y1 + 18 + 18 * i
        out.append(f'<line x1="{x0 + 12}" y1="{ly}" x2="{x0 + 36}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x0 + 42}" y="{ly}" dominant-baseline="middle">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
