"""Self-contained SVG line plots (no external renderer, no external refs).

Static figure output for the CLI: polyline curves, axis boxes with 1-2-5
ticks, optional vertical markers and error-bar points.  Output is plain
SVG 1.1 text with fixed float formatting, so identical inputs give identical
bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f6fb2", "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#666666")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi] with a 1-2-5 step."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi <= lo:
        hi = lo + (abs(lo) if lo else 1.0)
    span = hi - lo
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if span / step <= target:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _fmt(value: float) -> str:
    return f"{value:.6g}"


class _Canvas:
    def __init__(self, width, height, margin):
        self.width = width
        self.height = height
        self.margin = margin
        self.parts = []

    def add(self, element: str) -> None:
        self.parts.append(element)

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>\n'
            f"{body}\n</svg>\n"
        )


def line_plot(path, x, series, *, title: str = "", xlabel: str = "",
              ylabel: str = "", points=None, vlines=(),
              size=(960, 540), logy: bool = False) -> None:
    """Write an SVG with one polyline per (label, values) pair in ``series``.

    ``points`` is an optional list of (x, y, sigma) error-bar triples;
    ``vlines`` draws labeled vertical markers (position, label).
    """
    x = np.asarray(x, dtype=np.float64)
    series = [(label, np.asarray(vals, dtype=np.float64)) for label, vals in series]
    width, height = size
    margin = dict(left=72, right=24, top=34, bottom=48)
    plot_w = width - margin["left"] - margin["right"]
    plot_h = height - margin["top"] - margin["bottom"]

    ys = [v for _, vals in series for v in (vals.min(), vals.max())]
    if points:
        ys += [p[1] - p[2] for p in points] + [p[1] + p[2] for p in points]
    y_lo, y_hi = float(min(ys)), float(max(ys))
    if logy:
        positive = [v for _, vals in series for v in vals[vals > 0.0]]
        if not positive:
            raise ValueError("log-scale plot needs positive values")
        y_lo = math.log10(min(positive))
        y_hi = math.log10(max(positive))
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    def to_px(xv, yv):
        if logy:
            yv = math.log10(yv) if yv > 0.0 else y_lo
        px = margin["left"] + (xv - x_lo) / (x_hi - x_lo) * plot_w
        py = margin["top"] + (y_hi - yv) / (y_hi - y_lo) * plot_h
        return px, py

    cv = _Canvas(width, height, margin)
    cv.add(f'<rect x="{margin["left"]}" y="{margin["top"]}" width="{plot_w}" '
           f'height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>')

    for tick in nice_ticks(x_lo, x_hi):
        px, _ = to_px(tick, y_lo if not logy else 10.0**y_lo)
        y0 = margin["top"] + plot_h
        cv.add(f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" '
               'stroke="black" stroke-width="1"/>')
        cv.add(f'<text x="{_fmt(px)}" y="{y0 + 18}" font-size="11" '
               f'text-anchor="middle" font-family="sans-serif">{_fmt(tick)}</text>')
    for tick in nice_ticks(y_lo, y_hi):
        label = 10.0**tick if logy else tick
        _, py = to_px(x_lo, 10.0**tick if logy else tick)
        x0 = margin["left"]
        cv.add(f'<line x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
               'stroke="black" stroke-width="1"/>')
        cv.add(f'<text x="{x0 - 8}" y="{_fmt(py + 4)}" font-size="11" '
               f'text-anchor="end" font-family="sans-serif">{_fmt(label)}</text>')

    for pos, label in vlines:
        px, _ = to_px(pos, y_lo if not logy else 10.0**y_lo)
        cv.add(f'<line x1="{_fmt(px)}" y1="{margin["top"]}" x2="{_fmt(px)}" '
               f'y2="{margin["top"] + plot_h}" stroke="#999999" '
               'stroke-width="1" stroke-dasharray="5,4"/>')
        if label:
            cv.add(f'<text x="{_fmt(px + 4)}" y="{margin["top"] + 14}" '
                   f'font-size="11" font-family="sans-serif">{escape(label)}</text>')

    for k, (label, vals) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        if logy:
            keep = vals > 0.0
        else:
            keep = np.ones(vals.shape, dtype=bool)
        coords = " ".join(
            f"{_fmt(px)},{_fmt(py)}"
            for px, py in (to_px(xi, yi)
                           for xi, yi in zip(x[keep], vals[keep]))
        )
        cv.add(f'<polyline points="{coords}" fill="none" stroke="{color}" '
               'stroke-width="1.4"/>')
        lx = margin["left"] + plot_w - 150
        ly = margin["top"] + 16 + 16 * k
        cv.add(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
               f'stroke="{color}" stroke-width="2"/>')
        cv.add(f'<text x="{lx + 28}" y="{ly}" font-size="12" '
               f'font-family="sans-serif">{escape(str(label))}</text>')

    if points:
        for xv, yv, sv in points:
            px, py = to_px(xv, yv)
            _, py_lo = to_px(xv, yv - sv if not logy else max(yv - sv, 10.0**y_lo))
            _, py_hi = to_px(xv, yv + sv)
            cv.add(f'<line x1="{_fmt(px)}" y1="{_fmt(py_lo)}" x2="{_fmt(px)}" '
                   f'y2="{_fmt(py_hi)}" stroke="black" stroke-width="1"/>')
            cv.add(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.4" '
                   'fill="black"/>')

    if title:
        cv.add(f'<text x="{width / 2}" y="20" font-size="14" '
               f'text-anchor="middle" font-family="sans-serif">{escape(title)}</text>')
    if xlabel:
        cv.add(f'<text x="{margin["left"] + plot_w / 2}" y="{height - 10}" '
               f'font-size="12" text-anchor="middle" '
               f'font-family="sans-serif">{escape(xlabel)}</text>')
    if ylabel:
        yx, yy = 18, margin["top"] + plot_h / 2
        cv.add(f'<text x="{yx}" y="{yy}" font-size="12" text-anchor="middle" '
               f'font-family="sans-serif" transform="rotate(-90 {yx} {yy})">'
               f"{escape(ylabel)}</text>")

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cv.render())
