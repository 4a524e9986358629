"""
Worm-curve dark spots and the four-element covariance descriptor.

A sequence is written as a bit string (A=00, G=01, C=10, T=11), the bits
are laid row-major into a grid W wide, and every 1-bit becomes a dark
spot (A_i, B_i). The descriptor is the vector of central second moments
[M1 M2 M3 M4] of those spots, compared by Euclidean distance.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from conf import settings
from utils.errors import DescriptorError
from utils.rendering import csv_bytes, format_float, png_grid, svg_document
from utils.sequences import DnaSequence

BASE_BITS = {"A": "00", "G": "01", "C": "10", "T": "11"}


@dataclass(frozen=True)
class BitString:
    """Two bits per base, in sequence order."""

    bits: str

    def __len__(self) -> int:
        return len(self.bits)

    def ones(self) -> np.ndarray:
        """Zero-based indices of the 1-bits."""
        if not self.bits:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(np.frombuffer(self.bits.encode("ascii"), dtype=np.uint8) == ord("1"))


@dataclass(frozen=True)
class SpotSet:
    """Dark spots (A_i, B_i) on a grid `width` columns wide."""

    points: Tuple[Tuple[int, int], ...]
    width: int

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(-1, 2)

    def translated(self, dx: int, dy: int) -> "SpotSet":
        return SpotSet(points=tuple((a + dx, b + dy) for a, b in self.points), width=self.width)


@dataclass(frozen=True)
class CovarianceDescriptor:
    """D = [M1 M2 M3 M4] with the point count and means it came from."""

    m1: float
    m2: float
    m3: float
    m4: float
    count: int
    mean_a: float
    mean_b: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3, self.m4], dtype=np.float64)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": [self.mean_a, self.mean_b],
            "d": [self.m1, self.m2, self.m3, self.m4],
        }


def encode_binary(seq: DnaSequence) -> BitString:
    """Concatenate the 2-bit code of every base."""
    return BitString("".join(BASE_BITS[base] for base in seq.residues))


def auto_width(length: int) -> int:
    """Default grid width: ceil(sqrt(length)), at least 1."""
    width = math.isqrt(length)
    if width * width < length:
        width += 1
    return max(1, width)


def spot_set(bits: BitString, width: Optional[int] = None) -> SpotSet:
    """
    Lay the bits row-major into a grid and keep the 1-bits.

    Args:
        bits: Encoded sequence.
        width: Grid width; None picks `auto_width(len(bits))`.

    Returns:
        SpotSet with bit j at (j mod W, j div W), in bit order.
    """
    if width is None:
        width = auto_width(len(bits))
    if width < 1:
        raise ValueError(f"Grid width must be at least 1, got {width}")
    ones = bits.ones()
    points = tuple(zip((ones % width).tolist(), (ones // width).tolist()))
    return SpotSet(points=points, width=width)


def covariance_descriptor(points: SpotSet) -> CovarianceDescriptor:
    """
    Central second moments of a spot set, 1/m normalised.

    Moments come from integer sums, M = (m*Sxy - Sx*Sy) / m^2, so M2 and M3
    are identical and shifting every point leaves D unchanged.

    Raises:
        DescriptorError: If the spot set is empty.
    """
    m = len(points)
    if m == 0:
        raise DescriptorError("descriptor undefined for empty spot set")
    coords = points.as_array()
    a = coords[:, 0]
    b = coords[:, 1]
    sum_a = int(a.sum())
    sum_b = int(b.sum())
    saa = int(np.dot(a, a))
    sab = int(np.dot(a, b))
    sbb = int(np.dot(b, b))
    denominator = m * m
    m1 = (m * saa - sum_a * sum_a) / denominator
    m2 = (m * sab - sum_a * sum_b) / denominator
    m3 = (m * sab - sum_b * sum_a) / denominator
    m4 = (m * sbb - sum_b * sum_b) / denominator
    return CovarianceDescriptor(m1=m1, m2=m2, m3=m3, m4=m4, count=m,
                                mean_a=sum_a / m, mean_b=sum_b / m)


def worm_descriptor(seq: DnaSequence, width: Optional[int] = None) -> CovarianceDescriptor:
    """encode_binary -> spot_set -> covariance_descriptor in one call."""
    return covariance_descriptor(spot_set(encode_binary(seq), width))


def descriptor_distance(d_i: Union[CovarianceDescriptor, Sequence[float]],
                        d_j: Union[CovarianceDescriptor, Sequence[float]]) -> float:
    """Euclidean distance |D_i - D_j| between two descriptors."""
    v_i = d_i.vector if isinstance(d_i, CovarianceDescriptor) else np.asarray(d_i, dtype=np.float64)
    v_j = d_j.vector if isinstance(d_j, CovarianceDescriptor) else np.asarray(d_j, dtype=np.float64)
    diff = v_i - v_j
    return float(np.sqrt(np.dot(diff, diff)))


def emit_spots(points: SpotSet, fmt: str = "csv", outline: bool = False) -> bytes:
    """
    Render a spot set.

    Args:
        points: Spots to draw.
        fmt: "csv" (header a,b), "svg" (one circle per spot) or "png".
        outline: Draw the grid border in SVG output.
    """
    if fmt == "csv":
        return csv_bytes(("a", "b"), points.points)
    if fmt == "svg":
        return _spots_svg(points, outline)
    if fmt == "png":
        return png_grid(_spot_cells(points), settings.PNG_CELL_SIZE)
    raise ValueError(f"Unknown spot format {fmt!r}")


def emit_descriptor(record_id: str, descriptor: CovarianceDescriptor, width: int) -> bytes:
    """JSON document for one record's descriptor."""
    payload = {"id": record_id, "width": width}
    payload.update(descriptor.to_dict())
    return (json.dumps(payload) + "\n").encode("utf-8")


def _grid_rows(points: SpotSet) -> int:
    if not points.points:
        return 1
    return max(b for _, b in points.points) + 1


def _spot_cells(points: SpotSet) -> np.ndarray:
    cells = np.zeros((_grid_rows(points), points.width), dtype=bool)
    for a, b in points.points:
        cells[b, a] = True
    return cells


def _spots_svg(points: SpotSet, outline: bool) -> bytes:
    cell = 10
    margin = 10
    rows = _grid_rows(points)
    width = points.width * cell + 2 * margin
    height = rows * cell + 2 * margin
    elements = []
    if outline:
        elements.append(f'<rect class="grid" x="{margin}" y="{margin}" width="{points.width * cell}" '
                        f'height="{rows * cell}" fill="none" stroke="#888" />')
    radius = format_float(cell * 0.4)
    for a, b in points.points:
        cx = margin + a * cell + cell / 2
        cy = margin + b * cell + cell / 2
        elements.append(f'<circle cx="{format_float(cx)}" cy="{format_float(cy)}" r="{radius}" fill="black" />')
    return svg_document(width, height, elements, title="dark spots")
