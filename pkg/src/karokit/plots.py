"""Deterministic SVG output: fixed canvas, fixed number formatting, no clocks."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import numpy as np

from karokit.mission import FlipperConfig, Posture, _circles, com_position
from karokit.model import RobotSpec

CANVAS = 480
MARGIN = 40
CELLS = 64

PROJECTIONS = {  # name: (horizontal axis, vertical axis, labels)
    "front": (1, 2, ("y [m]", "z [m]")),
    "side": (0, 2, ("x [m]", "z [m]")),
    "top": (0, 1, ("x [m]", "y [m]")),
}


def _f(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _header(title: str, subtitle: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>',
        f'<text x="{MARGIN}" y="20" font-family="monospace" font-size="12">{title}</text>',
        f'<text x="{MARGIN}" y="{CANVAS - 8}" font-family="monospace" font-size="9">{subtitle}</text>',
    ]


class _Frame:
    """Maps a square data window onto the canvas, y up."""

    def __init__(self, lo: float, hi: float):
        self.lo, self.span = lo, hi - lo
        self.size = CANVAS - 2 * MARGIN

    def x(self, v: float) -> float:
        return MARGIN + (v - self.lo) / self.span * self.size

    def y(self, v: float) -> float:
        return CANVAS - MARGIN - (v - self.lo) / self.span * self.size

    def axes(self, labels: tuple[str, str]) -> list[str]:
        out = [f'<rect x="{MARGIN}" y="{MARGIN}" width="{self.size}" height="{self.size}" '
               f'fill="none" stroke="black" stroke-width="0.5"/>']
        for v in np.linspace(self.lo, self.lo + self.span, 5):
            out.append(f'<text x="{_f(self.x(v))}" y="{CANVAS - MARGIN + 12}" font-family="monospace" '
                       f'font-size="9" text-anchor="middle">{_f(v)}</text>')
            out.append(f'<text x="{MARGIN - 4}" y="{_f(self.y(v) + 3)}" font-family="monospace" '
                       f'font-size="9" text-anchor="end">{_f(v)}</text>')
        out.append(f'<text x="{CANVAS - MARGIN}" y="{CANVAS - MARGIN + 24}" font-family="monospace" '
                   f'font-size="10" text-anchor="end">{labels[0]}</text>')
        out.append(f'<text x="{MARGIN}" y="{MARGIN - 6}" font-family="monospace" '
                   f'font-size="10">{labels[1]}</text>')
        return out


def workspace_svg(points: np.ndarray, projection: str, title: str, subtitle: str = "",
                  extent: float | None = None) -> str:
    """Occupancy of a point cloud projected on one body-frame plane.

    Points are binned into a ``CELLS`` x ``CELLS`` grid so file size does not
    grow with sample count.
    """
    h, v, labels = PROJECTIONS[projection]
    pts = np.asarray(points, dtype=float)
    if extent is None:
        extent = float(np.max(np.abs(pts[:, [h, v]]))) if len(pts) else 1.0
        extent = math.ceil(extent * 10 + 1e-9) / 10
    fr = _Frame(-extent, extent)
    out = _header(title, subtitle) + fr.axes(labels)
    if len(pts):
        counts, _, _ = np.histogram2d(pts[:, h], pts[:, v], bins=CELLS,
                                      range=[[-extent, extent], [-extent, extent]])
        cell = fr.size / CELLS
        peak = np.log1p(counts.max())
        for i, j in zip(*np.nonzero(counts)):
            shade = int(round(200 - 160 * np.log1p(counts[i, j]) / peak))
            x0 = MARGIN + i * cell
            y0 = CANVAS - MARGIN - (j + 1) * cell
            out.append(f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(cell)}" height="{_f(cell)}" '
                       f'fill="rgb({shade},{shade},255)"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def posture_svg(spec: RobotSpec, postures: Sequence[Posture], config: FlipperConfig,
                title: str, subtitle: str = "") -> str:
    """Side-view sketches of the track circles, belts and COM per posture."""
    fr = _Frame(-1.0, 1.0)
    out = _header(title, subtitle) + fr.axes(("x [m]", "z [m]"))
    b = spec.track_radius
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    for k, p in enumerate(postures):
        colour = palette[k % len(palette)]
        circ = _circles(spec, p, config)
        c, s = math.cos(p.pitch), math.sin(p.pitch)
        world = {n: (x * c - z * s, x * s + z * c) for n, (x, z) in circ.items()}
        for a, bn in (("rear_main", "front_main"), ("front_main", "front_tip"),
                      ("rear_main", "rear_tip")):
            if a in world and bn in world:
                (x1, y1), (x2, y2) = world[a], world[bn]
                out.append(f'<line x1="{_f(fr.x(x1))}" y1="{_f(fr.y(y1))}" x2="{_f(fr.x(x2))}" '
                           f'y2="{_f(fr.y(y2))}" stroke="{colour}" stroke-width="2"/>')
        for name in sorted(world):
            x, y = world[name]
            out.append(f'<circle cx="{_f(fr.x(x))}" cy="{_f(fr.y(y))}" r="{_f(b / 2 * fr.size)}" '
                       f'fill="none" stroke="{colour}"/>')
        cx, cz = com_position(spec, p, config)
        out.append(f'<circle cx="{_f(fr.x(cx * c - cz * s))}" cy="{_f(fr.y(cx * s + cz * c))}" '
                   f'r="3" fill="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
