"""Deterministic SVG plots: power curves and per-group time series."""

from __future__ import annotations

import logging
import math
import re
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .core import TimeSeries
from .panel import ANONYMOUS, PanelDataset
from .power import PowerGrid

log = logging.getLogger(__name__)

W, H = 480, 320
MARGIN = dict(left=56, right=16, top=30, bottom=44)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _n(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 10))
        v += step
    return out


class _Frame:
    """Maps data coordinates into a panel at ``(ox, oy)`` of size ``w x h``."""

    def __init__(self, xlim, ylim, ox=0.0, oy=0.0, w=W, h=H, margin=MARGIN):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 1, self.x1 + 1
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 1, self.y1 + 1
        self.left = ox + margin["left"]
        self.right = ox + w - margin["right"]
        self.top = oy + margin["top"]
        self.bottom = oy + h - margin["bottom"]

    def px(self, x: float) -> float:
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y: float) -> float:
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)

    def axes(self, xlabel: str, ylabel: str, title: str, font: int = 12) -> list[str]:
        els = [
            f'<rect x="{_n(self.left)}" y="{_n(self.top)}" width="{_n(self.right - self.left)}" '
            f'height="{_n(self.bottom - self.top)}" fill="none" stroke="#444"/>'
        ]
        for t in _ticks(self.x0, self.x1):
            x = self.px(t)
            els.append(f'<line x1="{_n(x)}" y1="{_n(self.bottom)}" x2="{_n(x)}" y2="{_n(self.bottom + 4)}" stroke="#444"/>')
            els.append(f'<text x="{_n(x)}" y="{_n(self.bottom + 16)}" font-size="{font - 2}" text-anchor="middle">{t:g}</text>')
        for t in _ticks(self.y0, self.y1):
            y = self.py(t)
            els.append(f'<line x1="{_n(self.left - 4)}" y1="{_n(y)}" x2="{_n(self.left)}" y2="{_n(y)}" stroke="#444"/>')
            els.append(f'<text x="{_n(self.left - 6)}" y="{_n(y + 3)}" font-size="{font - 2}" text-anchor="end">{t:g}</text>')
        cx = (self.left + self.right) / 2
        els.append(f'<text x="{_n(cx)}" y="{_n(self.top - 10)}" font-size="{font}" text-anchor="middle">{escape(title)}</text>')
        els.append(f'<text x="{_n(cx)}" y="{_n(self.bottom + 32)}" font-size="{font - 1}" text-anchor="middle">{escape(xlabel)}</text>')
        cy = (self.top + self.bottom) / 2
        lx = self.left - 40
        els.append(
            f'<text x="{_n(lx)}" y="{_n(cy)}" font-size="{font - 1}" text-anchor="middle" '
            f'transform="rotate(-90 {_n(lx)} {_n(cy)})">{escape(ylabel)}</text>'
        )
        return els

    def polyline(self, xs, ys, color: str, dash: str | None = None) -> str:
        pts = " ".join(f"{_n(self.px(x))},{_n(self.py(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{extra}/>'


def _document(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" '
        f'viewBox="0 0 {_n(width)} {_n(height)}" font-family="sans-serif">'
    )
    return "\n".join([head, f'<rect width="{_n(width)}" height="{_n(height)}" fill="white"/>', *body, "</svg>"]) + "\n"


def power_svg(grid: PowerGrid, title: str | None = None) -> str:
    effects = [r.effect for r in grid.rows]
    frame = _Frame((min(effects), max(effects)), (0.0, 1.0))
    title = title or f"Power comparison ({grid.config.error.label()} errors)"
    body = frame.axes("slope change", "power", title)
    body.append(frame.polyline(effects, [r.power_t for r in grid.rows], COLORS[0]))
    body.append(frame.polyline(effects, [r.power_robust for r in grid.rows], COLORS[1], dash="5,3"))
    lx, ly = frame.left + 10, frame.top + 14
    for k, (label, color) in enumerate((("t-test", COLORS[0]), ("robust median test", COLORS[1]))):
        y = ly + 14 * k
        body.append(f'<line x1="{_n(lx)}" y1="{_n(y - 4)}" x2="{_n(lx + 18)}" y2="{_n(y - 4)}" stroke="{color}" stroke-width="1.5"/>')
        body.append(f'<text x="{_n(lx + 22)}" y="{_n(y)}" font-size="10">{label}</text>')
    return _document(W, H, body)


def _series_elements(frame: _Frame, name: str, s: TimeSeries, intervention: float | None, font: int) -> list[str]:
    body = frame.axes("time", "value", name, font=font)
    body.append(frame.polyline(s.times, s.values, COLORS[0]))
    if intervention is not None and frame.x0 <= intervention <= frame.x1:
        x = frame.px(intervention)
        body.append(
            f'<line x1="{_n(x)}" y1="{_n(frame.top)}" x2="{_n(x)}" y2="{_n(frame.bottom)}" '
            f'stroke="{COLORS[1]}" stroke-dasharray="4,3"/>'
        )
    return body


def _limits(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    return lo - pad, hi + pad


def series_svg(name: str, series: TimeSeries, intervention: float | None = None) -> str:
    frame = _Frame((float(series.times[0]), float(series.times[-1])), _limits(series.values))
    return _document(W, H, _series_elements(frame, name, series, intervention, 12))


def panel_grid_svg(dataset: PanelDataset, intervention: float | None = None, columns: int = 4) -> str:
    cw, ch = 300, 210
    margin = dict(left=48, right=10, top=26, bottom=40)
    items = list(dataset)
    rows = math.ceil(len(items) / columns)
    body: list[str] = []
    for k, (name, s) in enumerate(items):
        ox, oy = (k % columns) * cw, (k // columns) * ch
        frame = _Frame(
            (float(s.times[0]), float(s.times[-1])), _limits(s.values), ox, oy, cw, ch, margin
        )
        body.extend(_series_elements(frame, name or "series", s, intervention, 10))
    return _document(columns * cw, rows * ch, body)


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name) or "series"


def emit_power_plot(grid: PowerGrid, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"power_{_safe(grid.config.error.label())}.svg"
    path.write_text(power_svg(grid), encoding="utf-8")
    return [path]


def emit_panel_plots(groups: dict[str, TimeSeries] | PanelDataset, out_dir, intervention: float | None = None) -> list[Path]:
    """One SVG per group plus ``panel_grid.svg``; nothing for an empty list."""
    items = dict(groups.groups if isinstance(groups, PanelDataset) else groups)
    if not items:
        log.warning("no groups to plot; no files written")
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in sorted(items):
        p = out / f"series_{_safe(name if name != ANONYMOUS else 'series')}.svg"
        p.write_text(series_svg(name or "series", items[name], intervention), encoding="utf-8")
        paths.append(p)
    p = out / "panel_grid.svg"
    p.write_text(panel_grid_svg(PanelDataset(items), intervention), encoding="utf-8")
    paths.append(p)
    return paths
