"""CSV and SVG emitters.

CSV files carry a header row and shortest round-trip decimal floats so
repeated runs are byte-identical. SVG output is hand-rolled SVG 1.1:
polylines for curves, squares for scatter clouds, no plotting dependency.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 840, 560
MARGIN = 50


def write_csv(path: str | Path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])


def read_csv_columns(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    return header, np.asarray(rows)


def _scale(xs, ys):
    x_lo, x_hi = float(np.min(xs)), float(np.max(xs))
    y_lo, y_hi = float(np.min(ys)), float(np.max(ys))
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def px(x):
        return MARGIN + (x - x_lo) / x_span * (WIDTH - 2 * MARGIN)

    def py(y):
        return HEIGHT - MARGIN - (y - y_lo) / y_span * (HEIGHT - 2 * MARGIN)

    return px, py, (x_lo, x_hi, y_lo, y_hi)


def _document(body: list[str], title: str, bounds) -> str:
    x_lo, x_hi, y_lo, y_hi = bounds
    frame = (
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#999"/>'
    )
    labels = (
        f'<text x="{MARGIN}" y="{HEIGHT - 12}" font-size="12">{x_lo:.4g}</text>'
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 12}" font-size="12" '
        f'text-anchor="end">{x_hi:.4g}</text>'
        f'<text x="8" y="{HEIGHT - MARGIN}" font-size="12">{y_lo:.4g}</text>'
        f'<text x="8" y="{MARGIN + 4}" font-size="12">{y_hi:.4g}</text>'
        f'<text x="{WIDTH // 2}" y="24" font-size="14" text-anchor="middle">{title}</text>'
    )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        + frame
        + labels
        + "\n".join(body)
        + "\n</svg>\n"
    )


def write_curve_svg(path: str | Path, xs, ys, title: str = "") -> None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    px, py, bounds = _scale(xs, ys)
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    body = [f'<polyline points="{pts}" fill="none" stroke="#1565c0" stroke-width="1"/>']
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_document(body, title, bounds))


def write_scatter_svg(path: str | Path, xs, ys, title: str = "", max_points: int = 20000) -> None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) > max_points:
        stride = -(-len(xs) // max_points)
        xs, ys = xs[::stride], ys[::stride]
    px, py, bounds = _scale(xs, ys)
    body = [
        f'<rect x="{px(x):.2f}" y="{py(y):.2f}" width="1" height="1" fill="#2e7d32"/>'
        for x, y in zip(xs, ys)
    ]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_document(body, title, bounds))


def write_loglog_svg(path: str | Path, eps, counts, slope: float, title: str = "") -> None:
    xs = np.log(1.0 / np.asarray(eps, dtype=float))
    ys = np.log(np.asarray(counts, dtype=float))
    px, py, bounds = _scale(xs, ys)
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    body = [
        f'<polyline points="{pts}" fill="none" stroke="#c62828" stroke-width="1.5"/>',
    ]
    body += [
        f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="#c62828"/>'
        for x, y in zip(xs, ys)
    ]
    label = f"{title} (slope {slope:.3f})" if title else f"slope {slope:.3f}"
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(_document(body, label, bounds))
