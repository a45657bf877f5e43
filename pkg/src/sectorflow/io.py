"""CSV, JSON and SVG writers.  Floats go out at 17 significant digits so reruns are byte-identical."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

class _Canvas:
    """Maps a data box onto a square pixel frame with a margin."""

    def __init__(self, xlim, ylim, size=480, margin=40):
        self.xlim, self.ylim, self.size, self.margin = xlim, ylim, size, margin
        self.items = []

    def px(self, x, y):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        w = self.size - 2 * self.margin
        return (self.margin + (x - x0) / (x1 - x0) * w,
                self.size - self.margin - (y - y0) / (y1 - y0) * w)

    def polyline(self, pts, color="#000", width=1.0, closed=False):
        coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in (self.px(x, y) for x, y in pts))
        tag = "polygon" if closed else "polyline"
        self.items.append(f'<{tag} points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def rect(self, x, y, w, h, color):
        a, b = self.px(x, y + h)
        c, d = self.px(x + w, y)
        self.items.append(f'<rect x="{a:.2f}" y="{b:.2f}" width="{c - a:.2f}" height="{d - b:.2f}" fill="{color}"/>')

    def text(self, x, y, s, size=12):
        self.items.append(f'<text x="{x}" y="{y}" font-size="{size}" font-family="sans-serif">{s}</text>')

    def frame(self):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        self.polyline([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], "#888", 0.8, closed=True)

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        body = "\n".join(self.items)
        path.write_text(f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}">\n'
                        f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n')
        return path


LABEL_COLORS = {"cusp_zeta1": "#f4a582", "cusp_zeta2": "#92c5de", "eightfold_symmetric": "#1a1a1a",
                "undecided": "#dddddd"}


def portrait_svg(path, Z2, G, labels, dz, dg, title="reduced angle dynamics"):
    """Basin colours per grid cell plus a normalised arrow field on a coarser subgrid."""
    lo, hi = float(Z2.min()), float(Z2.max())
    cv = _Canvas((lo, hi), (lo, hi))
    n = Z2.shape[0]
    h = (hi - lo) / (n - 1)
    for i in range(n):
        for j in range(n):
            cv.rect(Z2[i, j] - h / 2, G[i, j] - h / 2, h, h, LABEL_COLORS.get(labels[i, j], "#fff"))
    stride = max(1, n // 16)
    for i in range(0, n, stride):
        for j in range(0, n, stride):
            v = np.array([dz[i, j], dg[i, j]])
            norm = float(np.hypot(*v))
            if norm == 0:
                continue
            d = 0.4 * stride * h * v / norm
            x, y = Z2[i, j], G[i, j]
            cv.polyline([(x, y), (x + d[0], y + d[1])], "#333", 0.8)
    cv.frame()
    cv.text(10, 20, f"{title}: horizontal zeta2, vertical gamma")
    return cv.save(path)


def contours_svg(path, snapshots, copies=1, extent=1.6, title="patch boundary"):
    """Overlay of boundary snapshots ``[(t, nodes), ...]`` including rotated images."""
    cv = _Canvas((-extent, extent), (-extent, extent))
    palette = ["#b2182b", "#ef8a62", "#67a9cf", "#2166ac", "#1b7837", "#762a83"]
    for k, (t, nodes) in enumerate(snapshots):
        color = palette[k % len(palette)]
        for r in range(copies):
            a = 2.0 * math.pi * r / copies
            c, s = math.cos(a), math.sin(a)
            pts = nodes @ np.array([[c, s], [-s, c]])
            cv.polyline(pts, color, 0.8, closed=True)
    th = np.linspace(0, 2 * math.pi, 200)
    cv.polyline(np.column_stack([np.cos(th), np.sin(th)]), "#aaa", 0.5, closed=True)
    times = ", ".join(f"{t:g}" for t, _ in snapshots)
    cv.text(10, 20, f"{title} at t = {times}")
    return cv.save(path)


def series_svg(path, x, ys, labels, title=""):
    """Line plot of one or more series against ``x``."""
    x = np.asarray(x, dtype=float)
    allv = np.concatenate([np.asarray(y, dtype=float) for y in ys])
    y0, y1 = float(np.min(allv)), float(np.max(allv))
    if y1 == y0:
        y1 = y0 + 1.0
    x0, x1 = float(x.min()), float(x.max()) if x.max() > x.min() else float(x.min()) + 1.0
    cv = _Canvas((x0, x1), (y0, y1))
    palette = ["#b2182b", "#2166ac", "#1b7837"]
    for k, (y, lab) in enumerate(zip(ys, labels)):
        cv.polyline(np.column_stack([x, y]), palette[k % 3], 1.2)
        cv.text(cv.size - 150, 20 + 14 * k, lab)
    cv.frame()
    cv.text(10, 20, title)
    cv.text(10, cv.size - 10, f"x in [{x0:.3g}, {x1:.3g}], y in [{y0:.3g}, {y1:.3g}]", 10)
    return cv.save(path)
