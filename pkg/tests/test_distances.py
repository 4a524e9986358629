"""
Tests for the distance engine.
"""

import json
import random
import unittest

import numpy as np

from utils.digraph import adjacency_matrix, d1, flatten
from utils.distances import (
    METHOD_METRICS,
    DescriptorCache,
    DistanceMatrix,
    MethodParams,
    check_combination,
    distance_matrix,
    emit_matrix,
    parse_matrix,
    rank_pairs,
)
from utils.errors import DescriptorError, MatrixError, UsageError
from utils.sequences import DnaSequence


def random_records(rng, count, low=20, high=80):
    return [
        DnaSequence(f"s{i}", "".join(rng.choice("ACGT") for _ in range(rng.randint(low, high))))
        for i in range(count)
    ]


class TestDistanceMatrix(unittest.TestCase):
    """Test matrix computation."""

    def setUp(self):
        """Set up a seeded generator."""
        self.rng = random.Random(67)

    def test_identical_sequences(self):
        """Test that identical sequences give the zero matrix for every combination."""
        records = [DnaSequence("a", "ATGGTGCACCTGACT"), DnaSequence("b", "ATGGTGCACCTGACT")]
        for method, metrics in METHOD_METRICS.items():
            for metric in metrics:
                matrix = distance_matrix(records, method, metric, workers=1)
                self.assertEqual(matrix.values.tolist(), [[0.0, 0.0], [0.0, 0.0]], msg=f"{method}/{metric}")

    def test_single_sequence(self):
        """Test the two-sequence minimum."""
        with self.assertRaises(MatrixError) as ctx:
            distance_matrix([DnaSequence("a", "ACGT")])
        self.assertIn("need at least 2 sequences", str(ctx.exception))

    def test_duplicate_ids(self):
        """Test that duplicate labels are refused."""
        with self.assertRaises(MatrixError):
            distance_matrix([DnaSequence("a", "ACGT"), DnaSequence("a", "ACGA")])

    def test_matches_pairwise_d1(self):
        """Test digraph/euclidean entries against per-pair d1 calls."""
        records = [DnaSequence("x", "ACGTATC"), DnaSequence("y", "AACCGT"), DnaSequence("z", "TTGACA")]
        matrix = distance_matrix(records, "digraph", "euclidean", workers=1)
        vectors = [flatten(adjacency_matrix(r)) for r in records]
        for i in range(3):
            for j in range(3):
                expected = 0.0 if i == j else d1(vectors[min(i, j)], vectors[max(i, j)])
                self.assertEqual(matrix[i, j], expected)

    def test_axioms_every_combination(self):
        """Test zero diagonal, exact symmetry and non-negativity."""
        for method, metrics in METHOD_METRICS.items():
            for metric in metrics:
                records = random_records(self.rng, 6)
                matrix = distance_matrix(records, method, metric, workers=2)
                matrix.validate()
                self.assertTrue(np.array_equal(matrix.values, matrix.values.T))
                self.assertTrue(np.all(np.diag(matrix.values) == 0.0))

    def test_worker_independence(self):
        """Test bitwise identical matrices across worker counts."""
        records = random_records(self.rng, 12)
        for method, metrics in METHOD_METRICS.items():
            for metric in metrics:
                reference = distance_matrix(records, method, metric, workers=1)
                for workers in (2, 4, 7):
                    other = distance_matrix(records, method, metric, workers=workers)
                    self.assertTrue(np.array_equal(reference.values, other.values))
                    self.assertEqual(emit_matrix(reference), emit_matrix(other))

    def test_cache_is_invisible(self):
        """Test that caching does not change the result."""
        records = random_records(self.rng, 5)
        cache = DescriptorCache()
        params = MethodParams(alpha=1.0)
        plain = distance_matrix(records, "digraph", "one_minus_cosine", params=params, workers=1)
        cached = distance_matrix(records, "digraph", "one_minus_cosine", params=params, workers=1, cache=cache)
        again = distance_matrix(records, "digraph", "one_minus_pcc", params=params, workers=1, cache=cache)
        self.assertTrue(np.array_equal(plain.values, cached.values))
        self.assertEqual(len(cache), 5)
        self.assertEqual(cache.hits, 5)
        self.assertEqual(again.labels, plain.labels)

    def test_invalid_combination(self):
        """Test that worm only pairs with euclidean."""
        with self.assertRaises(UsageError):
            check_combination("worm", "one_minus_cosine")
        with self.assertRaises(UsageError):
            distance_matrix(random_records(self.rng, 2), "dcurve", "one_minus_cosine")
        with self.assertRaises(UsageError):
            check_combination("zcurve", "euclidean")

    def test_error_names_sequence(self):
        """Test that a descriptor failure names the record."""
        records = [DnaSequence("ok", "ACGT"), DnaSequence("allA", "AAAA")]
        with self.assertRaises(DescriptorError) as ctx:
            distance_matrix(records, "worm", "euclidean", workers=1)
        self.assertIn("allA", str(ctx.exception))


class TestMatrixIO(unittest.TestCase):
    """Test matrix emission and parsing."""

    def setUp(self):
        """Set up a small matrix."""
        self.matrix = DistanceMatrix(
            labels=("a", "b", "c"),
            values=np.array([[0.0, 0.1, 2.0], [0.1, 0.0, 1.0 / 3.0], [2.0, 1.0 / 3.0, 0.0]]),
        )

    def test_csv_shape(self):
        """Test a header plus one row per label."""
        zero = DistanceMatrix(labels=("x", "y"), values=np.zeros((2, 2)))
        self.assertEqual(emit_matrix(zero, "csv").decode(), ",x,y\nx,0.0,0.0\ny,0.0,0.0\n")
        labels = tuple(f"t{i}" for i in range(12))
        big = DistanceMatrix(labels=labels, values=np.zeros((12, 12)))
        self.assertEqual(len(emit_matrix(big, "csv").decode().splitlines()), 13)

    def test_json_round_trip(self):
        """Test that parsing emitted JSON reproduces the matrix exactly."""
        parsed = parse_matrix(emit_matrix(self.matrix, "json"), "json")
        self.assertEqual(parsed.labels, self.matrix.labels)
        self.assertTrue(np.array_equal(parsed.values, self.matrix.values))
        payload = json.loads(emit_matrix(self.matrix, "json"))
        self.assertEqual(payload["labels"], ["a", "b", "c"])

    def test_csv_round_trip(self):
        """Test that parsing emitted CSV reproduces the matrix exactly."""
        parsed = parse_matrix(emit_matrix(self.matrix, "csv"), "csv")
        self.assertTrue(np.array_equal(parsed.values, self.matrix.values))

    def test_html(self):
        """Test the HTML table at four decimals."""
        html = emit_matrix(self.matrix, "html").decode()
        self.assertIn("<table>", html)
        self.assertIn("0.3333", html)
        self.assertIn("2.0000", html)

    def test_parse_rejects_bad_matrices(self):
        """Test asymmetric, negative and ragged input."""
        with self.assertRaises(MatrixError):
            parse_matrix(",a,b\na,0,1\nb,2,0\n")
        with self.assertRaises(MatrixError):
            parse_matrix(",a,b\na,0,-1\nb,-1,0\n")
        with self.assertRaises(MatrixError):
            parse_matrix(",a,b\na,0,1\n")
        with self.assertRaises(MatrixError):
            parse_matrix(",a,b\na,0,x\nb,x,0\n")

    def test_rank_pairs(self):
        """Test ascending pair order."""
        ranked = rank_pairs(self.matrix)
        self.assertEqual([(a, b) for a, b, _ in ranked], [("a", "b"), ("b", "c"), ("a", "c")])
        self.assertEqual(len(rank_pairs(self.matrix, top=1)), 1)
        for top in (0, -1):
            with self.assertRaises(ValueError):
                rank_pairs(self.matrix, top=top)


if __name__ == "__main__":
    unittest.main()
