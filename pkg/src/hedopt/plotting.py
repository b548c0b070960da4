"""Minimal static SVG plots: scatter and line charts with labeled axes.

Hand-rolled on purpose — results are small static figures (fronts, decision
sets, trajectories, convergence curves) and a polyline-and-circles SVG
keeps the toolkit dependency-free on the display side.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

WIDTH = 640
HEIGHT = 480
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 55

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


class PlotError(ValueError):
    """Raised for unplottable input (no data, non-finite extent)."""


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi] at a 1/2/5 step."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.4g}"


class _Frame:
    """Maps data coordinates onto the SVG plot area."""

    def __init__(self, xs, ys):
        xs = [x for x in xs if math.isfinite(x)]
        ys = [y for y in ys if math.isfinite(y)]
        if not xs or not ys:
            raise PlotError("nothing to plot")
        self.x_lo, self.x_hi = min(xs), max(xs)
        self.y_lo, self.y_hi = min(ys), max(ys)
        for attr_lo, attr_hi in (("x_lo", "x_hi"), ("y_lo", "y_hi")):
            lo, hi = getattr(self, attr_lo), getattr(self, attr_hi)
            pad = 0.05 * (hi - lo) if hi > lo else max(abs(lo), 1.0) * 0.05
            setattr(self, attr_lo, lo - pad)
            setattr(self, attr_hi, hi + pad)

    def px(self, x: float) -> float:
        frac = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return MARGIN_LEFT + frac * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)

    def py(self, y: float) -> float:
        frac = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return HEIGHT - MARGIN_BOTTOM - frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)


def _chrome(frame: _Frame, xlabel: str, ylabel: str, title: str) -> list[str]:
    parts = [
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
        f'width="{WIDTH - MARGIN_LEFT - MARGIN_RIGHT}" '
        f'height="{HEIGHT - MARGIN_TOP - MARGIN_BOTTOM}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for t in _nice_ticks(frame.x_lo, frame.x_hi):
        x = frame.px(t)
        y0 = HEIGHT - MARGIN_BOTTOM
        parts.append(f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" '
                     f'y2="{y0 + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{y0 + 18}" font-size="11" '
                     f'text-anchor="middle">{_fmt(t)}</text>')
    for t in _nice_ticks(frame.y_lo, frame.y_hi):
        y = frame.py(t)
        parts.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.1f}" '
                     f'x2="{MARGIN_LEFT}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.1f}" '
                     f'font-size="11" text-anchor="end">{_fmt(t)}</text>')
    parts.append(f'<text x="{(MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2}" '
                 f'y="{HEIGHT - 12}" font-size="13" '
                 f'text-anchor="middle">{xlabel}</text>')
    mid_y = (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2
    parts.append(f'<text x="16" y="{mid_y}" font-size="13" '
                 f'text-anchor="middle" '
                 f'transform="rotate(-90 16 {mid_y})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="22" font-size="14" '
                     f'text-anchor="middle">{title}</text>')
    return parts


def _legend(labels: Sequence[str]) -> list[str]:
    parts = []
    y = MARGIN_TOP + 14
    for k, label in enumerate(labels):
        if not label:
            continue
        color = PALETTE[k % len(PALETTE)]
        x = WIDTH - MARGIN_RIGHT - 130
        parts.append(f'<line x1="{x}" y1="{y - 4}" x2="{x + 20}" '
                     f'y2="{y - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{x + 26}" y="{y}" font-size="11">{label}</text>')
        y += 16
    return parts


def _write(path: str | Path, body: list[str]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    svg = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
           f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">']
    svg.extend(body)
    svg.append("</svg>")
    path.write_text("\n".join(svg) + "\n", encoding="utf-8")


def scatter_plot(path: str | Path,
                 series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
                 xlabel: str, ylabel: str, title: str = "") -> None:
    """series: (label, xs, ys) triples; one color per series."""
    all_x = [x for _, xs, _ in series for x in xs]
    all_y = [y for _, _, ys in series for y in ys]
    frame = _Frame(all_x, all_y)
    body = _chrome(frame, xlabel, ylabel, title)
    for k, (_, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        for x, y in zip(xs, ys):
            body.append(f'<circle cx="{frame.px(x):.1f}" '
                        f'cy="{frame.py(y):.1f}" r="3" fill="{color}" '
                        'fill-opacity="0.7"/>')
    if len(series) > 1:
        body.extend(_legend([label for label, _, _ in series]))
    _write(path, body)


def line_plot(path: str | Path,
              series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
              xlabel: str, ylabel: str, title: str = "") -> None:
    """series: (label, xs, ys) triples rendered as polylines."""
    all_x = [x for _, xs, _ in series for x in xs]
    all_y = [y for _, _, ys in series for y in ys]
    frame = _Frame(all_x, all_y)
    body = _chrome(frame, xlabel, ylabel, title)
    for k, (_, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{frame.px(x):.1f},{frame.py(y):.1f}"
                       for x, y in zip(xs, ys))
        body.append(f'<polyline points="{pts}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>')
    if len(series) > 1:
        body.extend(_legend([label for label, _, _ in series]))
    _write(path, body)
