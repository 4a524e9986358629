"""
Weighted digraph descriptor.

Every ordered position pair i < j of a sequence contributes an edge from
base S_i to base S_j weighing (j - i) ** -alpha. Parallel edges are merged
by summing their weights, which leaves a 4x4 matrix M over A, C, G, T;
its row-major flattening R is the 16-dimensional descriptor compared by
d1 (Euclidean), d2 (1 - cos) and d3 (1 - PCC).

The multigraph is never materialised. Ordered pairs are counted per lag
d = j - i (integers), then lag weights are summed in a fixed order, so the
matrix does not depend on how lags were split across workers.
"""

import json
import logging
import math
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import List, NamedTuple, Optional

import numpy as np

from utils.errors import DescriptorError
from utils.metrics import euclidean, one_minus_cosine, one_minus_pcc
from utils.rendering import csv_bytes, format_float
from utils.sequences import DNA_BASES, DnaSequence

logger = logging.getLogger(__name__)

BASE_INDEX = {base: index for index, base in enumerate(DNA_BASES)}
_CODE_LOOKUP = np.full(256, 255, dtype=np.uint8)
for _base, _index in BASE_INDEX.items():
    _CODE_LOOKUP[ord(_base)] = _index

DescriptorVector16 = np.ndarray


@dataclass(frozen=True)
class WeightParams:
    """Parameters of the positional weight (j - i) ** -alpha.

    Attributes:
        alpha: Exponent, must be positive and finite.
        max_distance: Largest lag j - i that contributes; None for unlimited.
    """

    alpha: float = 0.5
    max_distance: Optional[int] = None

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a positive finite number, got {self.alpha}")
        if self.max_distance is not None and self.max_distance < 1:
            raise ValueError(f"max_distance must be at least 1, got {self.max_distance}")


@dataclass(frozen=True)
class WeightMatrix:
    """Simplified digraph as a 4x4 matrix, rows and columns in A, C, G, T order."""

    m: np.ndarray
    n: int
    alpha: float

    def entry(self, source: str, target: str) -> float:
        return float(self.m[BASE_INDEX[source], BASE_INDEX[target]])


class Edge(NamedTuple):
    """One multigraph edge between positions i < j (1-based)."""

    i: int
    j: int
    source: str
    target: str
    weight: float


def encode_bases(seq: DnaSequence) -> np.ndarray:
    """Bases as indices 0..3 in A, C, G, T order."""
    return _CODE_LOOKUP[np.frombuffer(seq.residues.encode("ascii"), dtype=np.uint8)]


def _count_lags(codes: np.ndarray, lags: range) -> np.ndarray:
    counts = np.zeros((len(lags), 16), dtype=np.int64)
    for row, lag in enumerate(lags):
        pair_index = codes[:-lag].astype(np.int64) * 4 + codes[lag:]
        counts[row] = np.bincount(pair_index, minlength=16)
    return counts


def _split(lags: range, parts: int) -> List[range]:
    size = max(1, math.ceil(len(lags) / parts))
    return [range(start, min(start + size, lags.stop)) for start in range(lags.start, lags.stop, size)]


def lag_counts(seq: DnaSequence, max_lag: int, workers: int = 1) -> np.ndarray:
    """
    Count ordered base pairs per lag.

    Args:
        seq: Source sequence.
        max_lag: Largest lag to count (lags run 1..max_lag).
        workers: Threads to split the lags over.

    Returns:
        Array of shape (max_lag, 16); row d-1 holds the pair counts at lag d,
        column 4*x + y the count of base x followed d positions later by y.
    """
    codes = encode_bases(seq)
    lags = range(1, max_lag + 1)
    if max_lag < 1:
        return np.zeros((0, 16), dtype=np.int64)
    if workers <= 1 or len(lags) < 2:
        return _count_lags(codes, lags)
    chunks = _split(lags, workers)
    with ThreadPool(min(workers, len(chunks))) as pool:
        parts = pool.starmap(_count_lags, [(codes, chunk) for chunk in chunks])
    return np.concatenate(parts, axis=0)


def adjacency_matrix(seq: DnaSequence, params: WeightParams = WeightParams(), workers: int = 1) -> WeightMatrix:
    """
    Build the 4x4 weight matrix of a sequence.

    m[x][y] = sum over positions i < j with S_i = x, S_j = y of (j - i) ** -alpha.

    Args:
        seq: Source sequence (any length; n <= 1 gives the zero matrix).
        params: Weight exponent and optional lag cutoff.
        workers: Threads used for pair counting; does not change the result.

    Returns:
        WeightMatrix for the sequence.
    """
    n = len(seq)
    max_lag = n - 1
    if params.max_distance is not None:
        max_lag = min(max_lag, params.max_distance)
    counts = lag_counts(seq, max_lag, workers)
    if max_lag < 1:
        return WeightMatrix(m=np.zeros((4, 4)), n=n, alpha=params.alpha)
    weights = np.arange(1, max_lag + 1, dtype=np.float64) ** -params.alpha
    totals = (counts * weights[:, None]).sum(axis=0)
    logger.debug("%s: weight matrix over %d lag(s)", seq.id, max_lag)
    return WeightMatrix(m=totals.reshape(4, 4), n=n, alpha=params.alpha)


def total_weight(n: int, alpha: float) -> float:
    """Sum of (n - d) * d ** -alpha for d = 1..n-1: the weight of every pair."""
    if n < 2:
        return 0.0
    d = np.arange(1, n, dtype=np.float64)
    return float(np.sum((n - d) * d ** -alpha))


def edge_list(seq: DnaSequence, params: WeightParams = WeightParams()) -> List[Edge]:
    """Individual multigraph edges, for inspection. Quadratic in length."""
    edges = []
    residues = seq.residues
    for i in range(len(residues)):
        for j in range(i + 1, len(residues)):
            lag = j - i
            if params.max_distance is not None and lag > params.max_distance:
                break
            edges.append(Edge(i + 1, j + 1, residues[i], residues[j], lag ** -params.alpha))
    return edges


def flatten(matrix: WeightMatrix) -> DescriptorVector16:
    """Row-major 16-vector [(A,A), (A,C), ..., (T,T)]."""
    return np.asarray(matrix.m, dtype=np.float64).reshape(16).copy()


def d1(r_s: DescriptorVector16, r_h: DescriptorVector16) -> float:
    """Euclidean distance between descriptor vectors."""
    return euclidean(r_s, r_h)


def d2(r_s: DescriptorVector16, r_h: DescriptorVector16) -> float:
    """1 - cos of the included angle; DescriptorError for a zero vector."""
    try:
        return one_minus_cosine(r_s, r_h)
    except DescriptorError:
        raise DescriptorError("angle undefined for a zero descriptor vector")


def d3(r_s: DescriptorVector16, r_h: DescriptorVector16) -> float:
    """1 - PCC over the 16 components; DescriptorError for a constant vector."""
    return one_minus_pcc(r_s, r_h)


def emit_weight_matrix(record_id: str, matrix: WeightMatrix, fmt: str = "json") -> bytes:
    """
    Render a weight matrix.

    Args:
        record_id: Source record id.
        matrix: Matrix to render.
        fmt: "json" ({id, alpha, r}) or "csv" (labelled 4x4 grid).
    """
    if fmt == "json":
        payload = {"id": record_id, "alpha": matrix.alpha, "r": flatten(matrix).tolist()}
        return (json.dumps(payload) + "\n").encode("utf-8")
    if fmt == "csv":
        rows = [
            [base] + [format_float(value) for value in matrix.m[index]]
            for index, base in enumerate(DNA_BASES)
        ]
        return csv_bytes(["", *DNA_BASES], rows)
    raise ValueError(f"Unknown weight matrix format {fmt!r}")


def emit_edges(edges: List[Edge]) -> bytes:
    """CSV of multigraph edges (i, j, source, target, weight)."""
    return csv_bytes(("i", "j", "source", "target", "weight"),
                     [(e.i, e.j, e.source, e.target, format_float(e.weight)) for e in edges])
