"""
Distance functions between descriptor vectors.

All three are symmetric in their arguments bit for bit and return exactly
0 for identical vectors.
"""

from typing import Callable, Dict, Sequence

import numpy as np

from utils.errors import DescriptorError

Vector = Sequence[float]


def _as_vectors(x: Vector, y: Vector):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DescriptorError(f"Vector lengths differ: {x.size} vs {y.size}")
    return x, y


def euclidean(x: Vector, y: Vector) -> float:
    """Euclidean norm of x - y."""
    x, y = _as_vectors(x, y)
    diff = x - y
    return float(np.sqrt(np.dot(diff, diff)))


def cosine_similarity(x: Vector, y: Vector) -> float:
    x, y = _as_vectors(x, y)
    norm = np.sqrt(np.dot(x, x)) * np.sqrt(np.dot(y, y))
    if norm == 0.0:
        raise DescriptorError("angle undefined for a zero vector")
    return float(np.clip(np.dot(x, y) / norm, -1.0, 1.0))


def one_minus_cosine(x: Vector, y: Vector) -> float:
    """1 - cos of the angle between x and y, in [0, 2]."""
    if np.array_equal(np.asarray(x), np.asarray(y)):
        # Still reject the zero vector.
        cosine_similarity(x, y)
        return 0.0
    return 1.0 - cosine_similarity(x, y)


def pearson(x: Vector, y: Vector) -> float:
    """Pearson correlation coefficient of two equal-length vectors."""
    x, y = _as_vectors(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    norm = np.sqrt(np.dot(xc, xc)) * np.sqrt(np.dot(yc, yc))
    if norm == 0.0:
        raise DescriptorError("PCC undefined for zero-variance vector")
    return float(np.clip(np.dot(xc, yc) / norm, -1.0, 1.0))


def one_minus_pcc(x: Vector, y: Vector) -> float:
    """1 - Pearson correlation, in [0, 2]."""
    if np.array_equal(np.asarray(x), np.asarray(y)):
        pearson(x, y)
        return 0.0
    return 1.0 - pearson(x, y)


METRICS: Dict[str, Callable[[Vector, Vector], float]] = {
    "euclidean": euclidean,
    "one_minus_cosine": one_minus_cosine,
    "one_minus_pcc": one_minus_pcc,
}
