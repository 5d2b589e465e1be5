"""Minimal deterministic SVG emission for orbit and portrait views.

SVG output is a view only; the CSV files are the data of record. Colors
and coordinates are formatted with fixed precision so identical runs
produce identical bytes.
"""

from __future__ import annotations

import math


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def color_wheel(i: int, n: int) -> str:
    """Deterministic distinct-ish colors around the hue circle."""
    h = (i / max(n, 1)) % 1.0
    # simple HSV -> RGB with s = 0.85, v = 0.75
    s, v = 0.85, 0.75
    j = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    p = v * (1 - s)
    q = v * (1 - f * s)
    t = v * (1 - (1 - f) * s)
    r, g, b = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][j]
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


class SvgCanvas:
    """Fixed-size canvas mapping a data window to page coordinates (y up)."""

    def __init__(self, xlim, ylim, width=720, margin=24):
        self.x0, self.x1 = float(xlim[0]), float(xlim[1])
        self.y0, self.y1 = float(ylim[0]), float(ylim[1])
        dx = self.x1 - self.x0
        dy = self.y1 - self.y0
        self.scale = (width - 2 * margin) / dx
        self.width = width
        self.height = int(math.ceil(dy * self.scale + 2 * margin))
        self.margin = margin
        self.parts = []

    def _map(self, x, y):
        px = self.margin + (x - self.x0) * self.scale
        py = self.height - self.margin - (y - self.y0) * self.scale
        return px, py

    def polyline(self, pts, stroke="#1f3552", width=1.0, opacity=1.0):
        coords = " ".join("{},{}".format(*(map(_fmt, self._map(x, y))))
                          for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}" stroke-opacity="{_fmt(opacity)}"/>')

    def dots(self, pts, fill="#aa3311", r=1.2, opacity=0.8):
        rs = _fmt(r)
        for x, y in pts:
            px, py = self._map(x, y)
            self.parts.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{rs}" '
                f'fill="{fill}" fill-opacity="{_fmt(opacity)}"/>')

    def write(self, path):
        body = "\n".join(self.parts)
        doc = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
               f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
               f'<rect width="100%" height="100%" fill="white"/>\n'
               f"{body}\n</svg>\n")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
