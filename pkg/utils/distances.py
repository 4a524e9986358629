"""
Labelled pairwise distance matrices over a set of sequences.

A descriptor is built once per sequence (sequentially, optionally through
a DescriptorCache), then every pair of the upper triangle is evaluated,
possibly on several threads, into a preallocated array that is mirrored
to the lower triangle. Nothing about the result depends on the worker
count or on evaluation order.
"""

import csv
import io
import json
import logging
import os
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import markdown
import numpy as np

from utils.dcurve import DCurve, dcurve, dcurve_descriptor, dcurve_pcc
from utils.digraph import WeightParams, adjacency_matrix, flatten
from utils.errors import DescriptorError, MatrixError, UsageError
from utils.metrics import METRICS
from utils.rendering import csv_bytes, format_float
from utils.sequences import DnaSequence
from utils.worm import worm_descriptor

logger = logging.getLogger(__name__)

# Which metric each representation is compared with.
METHOD_METRICS: Dict[str, Tuple[str, ...]] = {
    "dcurve": ("euclidean", "one_minus_pcc"),
    "worm": ("euclidean",),
    "digraph": ("euclidean", "one_minus_cosine", "one_minus_pcc"),
}
METHODS = tuple(METHOD_METRICS)
MATRIX_FORMATS = ("csv", "json", "html")


@dataclass(frozen=True)
class MethodParams:
    """Numeric parameters of the descriptor methods."""

    alpha: float = 0.5
    max_distance: Optional[int] = None
    worm_width: Optional[int] = None

    @property
    def weight_params(self) -> WeightParams:
        return WeightParams(alpha=self.alpha, max_distance=self.max_distance)

    def key(self, method: str) -> Tuple:
        if method == "digraph":
            return (self.alpha, self.max_distance)
        if method == "worm":
            return (self.worm_width,)
        return ()


@dataclass(frozen=True)
class DistanceMatrix:
    """Square matrix of distances with one label per row/column."""

    labels: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, pair: Tuple[int, int]) -> float:
        return float(self.values[pair])

    def distance(self, label_a: str, label_b: str) -> float:
        return float(self.values[self.labels.index(label_a), self.labels.index(label_b)])

    def validate(self, tolerance: float = 0.0) -> "DistanceMatrix":
        """
        Check the matrix axioms.

        Raises:
            MatrixError: Non-square shape, label count mismatch, duplicate
                labels, non-finite or negative entries, non-zero diagonal or
                asymmetry beyond `tolerance`.
        """
        values = self.values
        n = len(self.labels)
        if values.shape != (n, n):
            raise MatrixError(f"matrix shape {values.shape} does not match {n} labels")
        if len(set(self.labels)) != n:
            raise MatrixError("matrix labels must be unique")
        if not np.all(np.isfinite(values)):
            raise MatrixError("matrix has non-finite entries")
        if np.any(values < 0):
            i, j = np.argwhere(values < 0)[0]
            raise MatrixError(f"negative distance between {self.labels[i]!r} and {self.labels[j]!r}")
        if np.any(np.abs(np.diag(values)) > tolerance):
            raise MatrixError("matrix diagonal must be zero")
        if np.any(np.abs(values - values.T) > tolerance):
            i, j = np.argwhere(np.abs(values - values.T) > tolerance)[0]
            raise MatrixError(f"matrix is not symmetric at {self.labels[i]!r}/{self.labels[j]!r}")
        return self


class DescriptorCache:
    """Descriptors keyed by (method, parameters, residues).

    Filled sequentially before pair evaluation and only read afterwards.
    """

    def __init__(self):
        self._store: Dict[Tuple, Any] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._store)

    def get_or_build(self, key: Tuple, build: Callable[[], Any]) -> Any:
        if key in self._store:
            self.hits += 1
            return self._store[key]
        self.misses += 1
        value = build()
        self._store[key] = value
        return value


def check_combination(method: str, metric: str):
    """Reject a (method, metric) pair the method is not compared with."""
    if method not in METHOD_METRICS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if metric not in METHOD_METRICS[method]:
        raise UsageError(
            f"metric {metric!r} is not defined for method {method!r}; "
            f"use one of {', '.join(METHOD_METRICS[method])}"
        )


def build_descriptor(seq: DnaSequence, method: str, params: MethodParams = MethodParams()):
    """Descriptor of one sequence: a DCurve for dcurve, a vector otherwise."""
    if method == "dcurve":
        return dcurve(seq)
    if method == "worm":
        return worm_descriptor(seq, params.worm_width).vector
    if method == "digraph":
        return flatten(adjacency_matrix(seq, params.weight_params))
    raise UsageError(f"unknown method {method!r}")


def _dcurve_distance(metric: str, x: DCurve, y: DCurve) -> float:
    if metric == "euclidean":
        return METRICS["euclidean"](dcurve_descriptor(x), dcurve_descriptor(y))
    correlation = dcurve_pcc(x, y)
    if x.cumulative == y.cumulative:
        return 0.0
    return max(0.0, 1.0 - correlation)


def pair_distance(method: str, metric: str, x, y) -> float:
    """Distance between two descriptors built by `build_descriptor`."""
    if method == "dcurve":
        return _dcurve_distance(metric, x, y)
    return METRICS[metric](x, y)


def default_workers() -> int:
    return os.cpu_count() or 1


def distance_matrix(
    seqs: Sequence[DnaSequence],
    method: str = "digraph",
    metric: str = "euclidean",
    params: MethodParams = MethodParams(),
    workers: Optional[int] = None,
    cache: Optional[DescriptorCache] = None,
) -> DistanceMatrix:
    """
    Compute the labelled distance matrix of a sequence set.

    Args:
        seqs: At least two sequences with unique ids.
        method: "dcurve", "worm" or "digraph".
        metric: "euclidean", "one_minus_cosine" or "one_minus_pcc"; must be
            one the method supports (see METHOD_METRICS).
        params: Descriptor parameters.
        workers: Threads for pair evaluation; None uses every CPU.
        cache: Optional descriptor cache shared across calls.

    Returns:
        DistanceMatrix with zero diagonal, mirrored upper triangle.

    Raises:
        UsageError: For an unknown method or an invalid combination.
        MatrixError: For fewer than two sequences or duplicate ids.
        DescriptorError: When a descriptor or distance is undefined; the
            message names the sequence id(s).
    """
    check_combination(method, metric)
    seqs = list(seqs)
    if len(seqs) < 2:
        raise MatrixError("need at least 2 sequences")
    labels = [seq.id for seq in seqs]
    seen = set()
    for label in labels:
        if label in seen:
            raise MatrixError(f"duplicate sequence id {label!r}")
        seen.add(label)

    descriptors = []
    for seq in seqs:
        try:
            if cache is None:
                descriptors.append(build_descriptor(seq, method, params))
            else:
                key = (method, params.key(method), seq.residues)
                descriptors.append(cache.get_or_build(key, lambda: build_descriptor(seq, method, params)))
        except DescriptorError as exc:
            raise DescriptorError(f"sequence {seq.id!r}: {exc}") from exc
    logger.info("Built %d %s descriptor(s)", len(descriptors), method)

    n = len(seqs)
    pairs = [(i, j) for i in range(n - 1) for j in range(i + 1, n)]
    values = np.zeros((n, n), dtype=np.float64)

    def evaluate(i: int, j: int):
        try:
            values[i, j] = pair_distance(method, metric, descriptors[i], descriptors[j])
        except DescriptorError as exc:
            raise DescriptorError(f"sequences {labels[i]!r} and {labels[j]!r}: {exc}") from exc

    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise UsageError(f"worker count must be at least 1, got {workers}")
    if workers == 1 or len(pairs) < 2:
        for i, j in pairs:
            evaluate(i, j)
    else:
        with ThreadPool(min(workers, len(pairs))) as pool:
            pool.starmap(evaluate, pairs)

    upper = np.triu_indices(n, k=1)
    values[(upper[1], upper[0])] = values[upper]
    logger.info("Computed %d pair distance(s) with %s/%s", len(pairs), method, metric)
    return DistanceMatrix(labels=tuple(labels), values=values)


def emit_matrix(matrix: DistanceMatrix, fmt: str = "csv") -> bytes:
    """
    Render a distance matrix.

    Args:
        matrix: Matrix to render.
        fmt: "csv" (label header row and column, round-trip floats),
            "json" ({"labels": [...], "values": [[...], ...]}) or "html"
            (table at four decimals).
    """
    if fmt == "csv":
        rows = [
            [label] + [format_float(value) for value in matrix.values[index]]
            for index, label in enumerate(matrix.labels)
        ]
        return csv_bytes(["", *matrix.labels], rows)
    if fmt == "json":
        payload = {"labels": list(matrix.labels), "values": matrix.values.tolist()}
        return (json.dumps(payload) + "\n").encode("utf-8")
    if fmt == "html":
        return _matrix_html(matrix)
    raise ValueError(f"Unknown matrix format {fmt!r}")


def _cell(text: str) -> str:
    return text.replace("|", "\\|")


def _matrix_html(matrix: DistanceMatrix) -> bytes:
    header = "| | " + " | ".join(_cell(label) for label in matrix.labels) + " |"
    rule = "|---" * (len(matrix.labels) + 1) + "|"
    body = [
        f"| {_cell(label)} | " + " | ".join(f"{value:.4f}" for value in matrix.values[index]) + " |"
        for index, label in enumerate(matrix.labels)
    ]
    md = markdown.Markdown(extensions=["extra"])
    return (md.convert("\n".join([header, rule, *body])) + "\n").encode("utf-8")


def parse_matrix(source, fmt: str = "csv") -> DistanceMatrix:
    """
    Read a matrix written by `emit_matrix` (csv or json) and validate it.

    Raises:
        MatrixError: For malformed text or a matrix violating the axioms.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if fmt == "json":
        try:
            payload = json.loads(source)
            matrix = DistanceMatrix(labels=tuple(payload["labels"]), values=np.array(payload["values"], dtype=np.float64))
        except (ValueError, KeyError, TypeError) as exc:
            raise MatrixError(f"malformed JSON matrix: {exc}") from exc
        return matrix.validate()
    if fmt != "csv":
        raise ValueError(f"Unknown matrix format {fmt!r}")
    rows = [row for row in csv.reader(io.StringIO(source)) if row]
    if not rows:
        raise MatrixError("empty matrix input")
    labels = tuple(rows[0][1:])
    if len(rows) - 1 != len(labels):
        raise MatrixError(f"expected {len(labels)} matrix rows, found {len(rows) - 1}")
    values = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(labels) + 1:
            raise MatrixError(f"row {line_no} has {len(row) - 1} values, expected {len(labels)}")
        if row[0] != labels[line_no - 2]:
            raise MatrixError(f"row {line_no} label {row[0]!r} does not match column {labels[line_no - 2]!r}")
        try:
            values.append([float(cell) for cell in row[1:]])
        except ValueError as exc:
            raise MatrixError(f"row {line_no}: {exc}") from exc
    return DistanceMatrix(labels=labels, values=np.array(values, dtype=np.float64).reshape(len(labels), len(labels))).validate()


def rank_pairs(matrix: DistanceMatrix, top: Optional[int] = None) -> List[Tuple[str, str, float]]:
    """Label pairs (i < j) by ascending distance; ties keep matrix order."""
    if top is not None and top < 1:
        raise ValueError(f"top must be at least 1, got {top}")
    n = len(matrix)
    pairs = [(matrix.labels[i], matrix.labels[j], float(matrix.values[i, j]))
             for i in range(n - 1) for j in range(i + 1, n)]
    pairs.sort(key=lambda pair: pair[2])
    return pairs if top is None else pairs[:top]


def emit_ranking(pairs: List[Tuple[str, str, float]]) -> bytes:
    return csv_bytes(("a", "b", "distance"), [(a, b, format_float(d)) for a, b, d in pairs])
