"""
D-curve representation of DNA built from dinucleotides.

Each of the 16 dinucleotides maps to a lattice point (a, b) with
a, b in {-2, -1, 1, 2}: the first base picks the quadrant, the second base
picks the magnitudes. Step k of the curve carries the k-th dinucleotide's
(a, b) and c = a * b; the curve itself is the running sum (a', b', c').
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, NamedTuple, Tuple

import numpy as np

from conf import settings
from utils.errors import DescriptorError
from utils.rendering import Viewport, csv_bytes, svg_document, svg_text
from utils.sequences import DNA_BASES, DnaSequence, dinucleotides

logger = logging.getLogger(__name__)

# First base -> quadrant signs of (a, b).
QUADRANT_SIGNS = {"A": (1, 1), "G": (-1, 1), "C": (-1, -1), "T": (1, -1)}
# Second base -> (|a|, |b|).
MAGNITUDES = {"A": (1, 1), "G": (1, 2), "T": (2, 1), "C": (2, 2)}

DinucleotideCoordMap = Dict[str, Tuple[int, int]]

CSV_HEADER = ("k", "a", "b", "c", "a_cum", "b_cum", "c_cum")
COMPONENTS = ("a", "b", "c")


def coordinate_map() -> DinucleotideCoordMap:
    """Build the 16-entry dinucleotide -> (a, b) map from the sign/magnitude rules."""
    coords = {}
    for first, second in product(DNA_BASES, repeat=2):
        sign_a, sign_b = QUADRANT_SIGNS[first]
        mag_a, mag_b = MAGNITUDES[second]
        coords[first + second] = (sign_a * mag_a, sign_b * mag_b)
    if len(set(coords.values())) != 16:
        raise RuntimeError("Dinucleotide coordinate map is not a bijection")
    return coords


DINUCLEOTIDE_COORDS: DinucleotideCoordMap = coordinate_map()


class DCurveStep(NamedTuple):
    """One row of the curve table."""

    dinucleotide: str
    a: int
    b: int
    k: int
    c: int


@dataclass(frozen=True)
class DCurve:
    """Per-step records and their running sums.

    Attributes:
        id: Source record id.
        steps: (dinucleotide, a, b, k, c) for k = 1..n-1.
        cumulative: (a'_k, b'_k, c'_k) for the same k.
    """

    id: str
    steps: Tuple[DCurveStep, ...]
    cumulative: Tuple[Tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def component(self, name: str) -> np.ndarray:
        """Cumulative series for "a", "b" or "c" as an integer array."""
        index = COMPONENTS.index(name)
        return np.array([point[index] for point in self.cumulative], dtype=np.int64)

    def negated(self) -> "DCurve":
        """The curve mirrored through the origin (every coordinate negated)."""
        steps = tuple(DCurveStep(s.dinucleotide, -s.a, -s.b, s.k, -s.c) for s in self.steps)
        cumulative = tuple((-a, -b, -c) for a, b, c in self.cumulative)
        return DCurve(id=self.id, steps=steps, cumulative=cumulative)


def dcurve(seq: DnaSequence, coord_map: DinucleotideCoordMap = DINUCLEOTIDE_COORDS) -> DCurve:
    """
    Build the D-curve of a sequence.

    Args:
        seq: Sequence of length n >= 2.
        coord_map: Dinucleotide coordinates to use.

    Returns:
        DCurve with n-1 steps.

    Raises:
        DescriptorError: If the sequence is shorter than two bases.
    """
    pairs = dinucleotides(seq)
    if not pairs:
        raise DescriptorError("sequence too short for dinucleotide curve")
    ab = np.array([coord_map[pair] for pair in pairs], dtype=np.int64)
    c = ab[:, 0] * ab[:, 1]
    cum = np.cumsum(np.column_stack([ab, c]), axis=0)
    steps = tuple(
        DCurveStep(pair, int(a), int(b), k, int(ck))
        for k, (pair, (a, b), ck) in enumerate(zip(pairs, ab, c), start=1)
    )
    cumulative = tuple((int(x), int(y), int(z)) for x, y, z in cum)
    return DCurve(id=seq.id, steps=steps, cumulative=cumulative)


def dcurve_descriptor(curve: DCurve) -> np.ndarray:
    """Terminal cumulative point divided by the step count: (a'_m, b'_m, c'_m) / m."""
    if not curve.steps:
        raise DescriptorError("descriptor undefined for an empty curve")
    m = len(curve.steps)
    return np.array(curve.cumulative[-1], dtype=np.float64) / m


def _nearest_indices(length: int, m: int) -> np.ndarray:
    """m indices spread over range(length), rounding half up, both ends included."""
    if m == 1:
        return np.zeros(1, dtype=np.int64)
    i = np.arange(m, dtype=np.int64)
    return (2 * i * (length - 1) + (m - 1)) // (2 * (m - 1))


def dcurve_pcc(curve_x: DCurve, curve_y: DCurve) -> float:
    """
    Mean Pearson correlation of the a', b', c' series of two curves.

    The longer curve is resampled to the shorter one's step count by
    nearest-index sampling before correlating.

    Raises:
        DescriptorError: If a curve has fewer than two steps or a compared
            series is constant.
    """
    m_x, m_y = len(curve_x), len(curve_y)
    if m_x < 2 or m_y < 2:
        raise DescriptorError("PCC needs curves with at least 2 steps")
    m = min(m_x, m_y)
    idx_x = _nearest_indices(m_x, m)
    idx_y = _nearest_indices(m_y, m)
    correlations = []
    for name in COMPONENTS:
        x = curve_x.component(name)[idx_x].astype(np.float64)
        y = curve_y.component(name)[idx_y].astype(np.float64)
        xc = x - x.mean()
        yc = y - y.mean()
        norm = np.sqrt(np.dot(xc, xc)) * np.sqrt(np.dot(yc, yc))
        if norm == 0.0:
            raise DescriptorError("PCC undefined for zero-variance series")
        correlations.append(float(np.clip(np.dot(xc, yc) / norm, -1.0, 1.0)))
    return float(np.mean(correlations))


def emit_dcurve(curve: DCurve, fmt: str = "csv") -> bytes:
    """
    Render a curve as CSV (one row per step) or as an SVG of its 2-D projections.

    The SVG holds one polyline per trace: the (a', b') projection and the
    (k, a'), (k, b'), (k, c') traces, each starting at the origin.
    """
    if fmt == "csv":
        rows = [
            (step.k, step.a, step.b, step.c, *cum)
            for step, cum in zip(curve.steps, curve.cumulative)
        ]
        return csv_bytes(CSV_HEADER, rows)
    if fmt == "svg":
        return _dcurve_svg(curve)
    raise ValueError(f"Unknown D-curve format {fmt!r}")


def _dcurve_svg(curve: DCurve) -> bytes:
    width, height, margin = settings.SVG_WIDTH, settings.SVG_HEIGHT, settings.SVG_MARGIN
    panel_w = (width - 3 * margin) / 2
    panel_h = height - 2 * margin
    a_cum = [point[0] for point in curve.cumulative]
    b_cum = [point[1] for point in curve.cumulative]
    c_cum = [point[2] for point in curve.cumulative]
    ks = list(range(1, len(curve.cumulative) + 1))

    projection = Viewport.fit(a_cum, b_cum, (margin, margin, panel_w, panel_h))
    traces = Viewport.fit(ks, a_cum + b_cum + c_cum, (2 * margin + panel_w, margin, panel_w, panel_h))

    elements = [svg_text(margin, margin - 12, "projection on a'-b'")]
    elements += projection.axes("a'", "b'")
    elements.append(projection.polyline([(0, 0)] + list(zip(a_cum, b_cum)), "projection-ab", "#1f77b4"))
    elements.append(svg_text(2 * margin + panel_w, margin - 12, "a', b', c' against k"))
    elements += traces.axes("k", "value")
    for name, series, colour in (("a", a_cum, "#d62728"), ("b", b_cum, "#2ca02c"), ("c", c_cum, "#9467bd")):
        elements.append(traces.polyline([(0, 0)] + list(zip(ks, series)), f"trace-{name}", colour))
    return svg_document(width, height, elements, title=f"D-curve {curve.id}")
