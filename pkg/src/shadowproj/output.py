"""CSV and SVG emission for boundary polylines.

CSV is the numeric contract (17 significant digits, LF line endings); SVG is
for looking at.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

import numpy as np

from .shadow import BoundaryPolyline

SVG_COLOURS = ("#1f4e79", "#c0392b", "#2e7d32")


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def polyline_csv(poly: BoundaryPolyline) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "u", "v"])
    for th, (u, v) in zip(poly.thetas, poly.points):
        writer.writerow([fmt17(th), fmt17(u), fmt17(v)])
    return buf.getvalue()


def write_csv(poly: BoundaryPolyline, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(polyline_csv(poly))
    return path


def polylines_svg(polys: Sequence[BoundaryPolyline], labels: Sequence[str] | None = None) -> str:
    """One closed ``<path>`` per polyline, sharing a fitted viewBox.

    The y axis is flipped so the picture has the usual mathematical
    orientation.
    """
    pts = np.vstack([p.points for p in polys])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    extent = float(max(hi - lo))
    margin = 0.05 * extent
    x0, y0 = lo[0] - margin, -hi[1] - margin
    w, h = (hi[0] - lo[0]) + 2 * margin, (hi[1] - lo[1]) + 2 * margin
    stroke = 0.005 * extent
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6f} {y0:.6f} {w:.6f} {h:.6f}">',
    ]
    labels = list(labels) if labels else [f"curve{i}" for i in range(len(polys))]
    for i, (poly, label) in enumerate(zip(polys, labels)):
        P = poly.points
        d = "M " + " L ".join(f"{x:.9f} {-y:.9f}" for x, y in P) + " Z"
        colour = SVG_COLOURS[i % len(SVG_COLOURS)]
        lines.append(
            f'<path id="{label}" d="{d}" fill="none" stroke="{colour}" '
            f'stroke-width="{stroke:.6f}" stroke-linejoin="round"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(polys, path, labels=None) -> Path:
    if isinstance(polys, BoundaryPolyline):
        polys = [polys]
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(polylines_svg(polys, labels))
    return path
