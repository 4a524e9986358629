"""
Shared emission helpers: CSV text, standalone SVG documents and PNG rasters.

All output is deterministic for fixed input: floats go through
`format_float` (shortest round-trip representation) and SVG coordinates are
written at fixed precision.
"""

import csv
import io
from html import escape
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image

# Handle different Pillow versions
try:
    from PIL.Image import Resampling
    NEAREST = Resampling.NEAREST
except ImportError:
    # Older Pillow versions
    NEAREST = Image.NEAREST

SVG_NS = "http://www.w3.org/2000/svg"


def format_float(value: float) -> str:
    """Shortest representation that round-trips to the same float."""
    value = float(value)
    if value == 0.0:
        return "0.0"
    return repr(value)


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    """Render rows as CSV (LF line endings, UTF-8)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().encode("utf-8")


def _px(value: float) -> str:
    return f"{value:.2f}"


class Viewport:
    """Maps data coordinates into a pixel rectangle (y axis pointing up).

    Args:
        x_range: (min, max) of the data on x.
        y_range: (min, max) of the data on y.
        box: (left, top, width, height) of the target area in pixels.
    """

    def __init__(self, x_range: Tuple[float, float], y_range: Tuple[float, float],
                 box: Tuple[float, float, float, float]):
        self.x_min, self.x_max = x_range
        self.y_min, self.y_max = y_range
        if self.x_max == self.x_min:
            self.x_min, self.x_max = self.x_min - 1, self.x_max + 1
        if self.y_max == self.y_min:
            self.y_min, self.y_max = self.y_min - 1, self.y_max + 1
        self.left, self.top, self.width, self.height = box

    @classmethod
    def fit(cls, xs: Sequence[float], ys: Sequence[float], box, include_origin: bool = True) -> "Viewport":
        xs = list(xs) + ([0.0] if include_origin else [])
        ys = list(ys) + ([0.0] if include_origin else [])
        return cls((min(xs), max(xs)), (min(ys), max(ys)), box)

    def x(self, value: float) -> float:
        return self.left + (value - self.x_min) / (self.x_max - self.x_min) * self.width

    def y(self, value: float) -> float:
        return self.top + self.height - (value - self.y_min) / (self.y_max - self.y_min) * self.height

    def axes(self, x_label: str, y_label: str) -> List[str]:
        """Axis lines through the data origin (clamped to the box) with labels."""
        x0 = min(max(0.0, self.x_min), self.x_max)
        y0 = min(max(0.0, self.y_min), self.y_max)
        right = self.left + self.width
        bottom = self.top + self.height
        return [
            f'<line class="axis" x1="{_px(self.left)}" y1="{_px(self.y(y0))}" '
            f'x2="{_px(right)}" y2="{_px(self.y(y0))}" stroke="#888" />',
            f'<line class="axis" x1="{_px(self.x(x0))}" y1="{_px(self.top)}" '
            f'x2="{_px(self.x(x0))}" y2="{_px(bottom)}" stroke="#888" />',
            svg_text(right, self.y(y0) - 4, x_label, anchor="end"),
            svg_text(self.x(x0) + 4, self.top + 12, y_label),
        ]

    def polyline(self, points: Sequence[Tuple[float, float]], element_id: str, stroke: str) -> str:
        coords = " ".join(f"{_px(self.x(px))},{_px(self.y(py))}" for px, py in points)
        return (f'<polyline id="{escape(element_id)}" points="{coords}" fill="none" '
                f'stroke="{stroke}" stroke-width="1.5" />')


def svg_text(x: float, y: float, text: str, anchor: str = "start", size: int = 12) -> str:
    return (f'<text x="{_px(x)}" y="{_px(y)}" font-size="{size}" '
            f'text-anchor="{anchor}">{escape(text)}</text>')


def svg_document(width: float, height: float, elements: Iterable[str], title: Optional[str] = None) -> bytes:
    """Wrap SVG elements into a standalone document."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="{SVG_NS}" width="{_px(width)}" height="{_px(height)}" '
        f'viewBox="0 0 {_px(width)} {_px(height)}">',
    ]
    if title:
        lines.append(f"<title>{escape(title)}</title>")
    lines.append(f'<rect width="{_px(width)}" height="{_px(height)}" fill="white" />')
    lines.extend(elements)
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def png_grid(cells: np.ndarray, cell_size: int = 4) -> bytes:
    """
    Render a boolean grid as a black-on-white PNG.

    Args:
        cells: 2-D boolean array, True cells are drawn black.
        cell_size: Pixel edge length of one cell.

    Returns:
        PNG file bytes.
    """
    cells = np.asarray(cells, dtype=bool)
    if cells.ndim != 2 or cells.size == 0:
        img = Image.new("L", (1, 1), 255)
    else:
        pixels = np.where(cells, 0, 255).astype(np.uint8)
        img = Image.fromarray(pixels)
        rows, cols = cells.shape
        img = img.resize((cols * cell_size, rows * cell_size), NEAREST)
    buffer = io.BytesIO()
    img.save(buffer, format="PNG", optimize=True)
    return buffer.getvalue()
