"""
Tests for the weighted digraph descriptor and the vector metrics.
"""

import json
import random
import unittest

import numpy as np

from utils.digraph import (
    WeightParams,
    adjacency_matrix,
    d1,
    d2,
    d3,
    edge_list,
    emit_weight_matrix,
    flatten,
    lag_counts,
    total_weight,
)
from utils.errors import DescriptorError
from utils.sequences import DnaSequence

# Reference 4-decimal vector for ACGTATC at alpha 1/2; entry 13 (T,C) was
# printed as 0.5000 but the weight rule gives 1 + 3 ** -0.5.
PRINTED_R = [0.5000, 2.1154, 0.7071, 2.0246, 0.5774, 0.4472, 1.0000, 1.2071,
             0.7071, 0.5000, 0.0, 1.5774, 1.0000, 0.5000, 0.0, 0.7071]
TC_INDEX = 13


def random_seq(rng, length, id="r"):
    return DnaSequence(id, "".join(rng.choice("ACGT") for _ in range(length)))


def brute_force(seq, alpha, max_distance=None):
    index = {base: i for i, base in enumerate("ACGT")}
    m = np.zeros((4, 4))
    for edge in edge_list(seq, WeightParams(alpha, max_distance)):
        m[index[edge.source], index[edge.target]] += edge.weight
    return m


class TestWorkedMatrix(unittest.TestCase):
    """Test the ACGTATC example."""

    def setUp(self):
        """Set up the matrix of ACGTATC at alpha 0.5."""
        self.matrix = adjacency_matrix(DnaSequence("s", "ACGTATC"), WeightParams(alpha=0.5))
        self.r = flatten(self.matrix)

    def test_printed_entries(self):
        """Test the 15 printed entries that follow the weight rule."""
        for index, expected in enumerate(PRINTED_R):
            if index == TC_INDEX:
                continue
            self.assertAlmostEqual(self.r[index], expected, delta=1e-4, msg=f"entry {index}")

    def test_tc_entry(self):
        """Test (T,C) = 3 ** -0.5 + 1."""
        self.assertAlmostEqual(self.matrix.entry("T", "C"), 1.5774, delta=1e-4)
        self.assertAlmostEqual(self.r[TC_INDEX], 1.0 + 3 ** -0.5, places=12)

    def test_total_weight(self):
        """Test that the entries add up to the weight of every pair."""
        self.assertAlmostEqual(self.r.sum(), 14.6476, delta=1e-3)
        self.assertAlmostEqual(self.r.sum(), total_weight(7, 0.5), places=12)


class TestAdjacencyMatrix(unittest.TestCase):
    """Test matrix construction on random input."""

    def test_total_weight_identity(self):
        """Test sum of entries against sum of (n - d) d^-alpha."""
        rng = random.Random(29)
        for _ in range(1000):
            n = rng.randint(2, 200)
            alpha = rng.choice((0.25, 0.5, 1.0, 2.0))
            r = flatten(adjacency_matrix(random_seq(rng, n), WeightParams(alpha)))
            expected = total_weight(n, alpha)
            self.assertLess(abs(r.sum() - expected) / expected, 1e-9)

    def test_reverse_is_transpose(self):
        """Test that reversing the sequence transposes the matrix exactly."""
        rng = random.Random(31)
        for _ in range(200):
            seq = random_seq(rng, rng.randint(2, 120))
            reverse = DnaSequence("rev", seq.residues[::-1])
            forward = adjacency_matrix(seq).m
            backward = adjacency_matrix(reverse).m
            np.testing.assert_array_equal(backward, forward.T)

    def test_matches_edge_enumeration(self):
        """Test against summing individual edges."""
        rng = random.Random(37)
        for _ in range(100):
            seq = random_seq(rng, rng.randint(1, 40))
            alpha = rng.choice((0.5, 1.0))
            max_distance = rng.choice((None, 1, 3, 10))
            m = adjacency_matrix(seq, WeightParams(alpha, max_distance)).m
            np.testing.assert_allclose(m, brute_force(seq, alpha, max_distance), rtol=1e-12, atol=1e-12)

    def test_workers_do_not_change_result(self):
        """Test bitwise identical matrices for any worker count."""
        rng = random.Random(41)
        seq = random_seq(rng, 500)
        reference = adjacency_matrix(seq, workers=1).m
        for workers in (2, 3, 8):
            np.testing.assert_array_equal(adjacency_matrix(seq, workers=workers).m, reference)

    def test_short_sequences(self):
        """Test that n <= 1 gives the zero matrix."""
        self.assertEqual(flatten(adjacency_matrix(DnaSequence("s", "A"))).sum(), 0.0)
        self.assertEqual(flatten(adjacency_matrix(DnaSequence("s", ""))).sum(), 0.0)

    def test_max_distance(self):
        """Test that a cutoff of 1 keeps only adjacent pairs."""
        m = adjacency_matrix(DnaSequence("s", "ACGT"), WeightParams(1.0, max_distance=1))
        self.assertEqual(flatten(m).tolist(), [0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0])

    def test_lag_counts(self):
        """Test per-lag pair counts."""
        counts = lag_counts(DnaSequence("s", "AAC"), 2)
        self.assertEqual(counts[0, 0], 1)  # AA at lag 1
        self.assertEqual(counts[0, 1], 1)  # AC at lag 1
        self.assertEqual(counts[1, 1], 1)  # AC at lag 2
        self.assertEqual(counts.sum(), 3)

    def test_invalid_params(self):
        """Test that non-positive alpha and cutoff are refused."""
        with self.assertRaises(ValueError):
            WeightParams(alpha=0)
        with self.assertRaises(ValueError):
            WeightParams(alpha=float("inf"))
        with self.assertRaises(ValueError):
            WeightParams(alpha=0.5, max_distance=0)


class TestVectorMetrics(unittest.TestCase):
    """Test d1, d2 and d3."""

    def setUp(self):
        """Set up random descriptor vectors."""
        self.rng = random.Random(43)

    def vector(self):
        return flatten(adjacency_matrix(random_seq(self.rng, self.rng.randint(10, 60))))

    def test_axioms(self):
        """Test zero self-distance, symmetry and the d1 triangle inequality."""
        for _ in range(1000):
            x, y, z = self.vector(), self.vector(), self.vector()
            for metric in (d1, d2, d3):
                self.assertEqual(metric(x, x), 0.0)
                self.assertEqual(metric(x, y), metric(y, x))
                self.assertGreaterEqual(metric(x, y), 0.0)
            self.assertLessEqual(d1(x, z), d1(x, y) + d1(y, z) + 1e-12)

    def test_scale_invariance(self):
        """Test d2(R, cR) = 0 and d3(R, aR + b) = 0."""
        for _ in range(1000):
            r = self.vector()
            c = self.rng.uniform(0.1, 10.0)
            a = self.rng.uniform(0.1, 10.0)
            b = self.rng.uniform(-5.0, 5.0)
            self.assertLess(abs(d2(r, c * r)), 1e-12)
            self.assertLess(abs(d3(r, a * r + b)), 1e-12)

    def test_undefined_cases(self):
        """Test zero and constant vectors."""
        zero = np.zeros(16)
        ones = np.ones(16)
        r = flatten(adjacency_matrix(DnaSequence("s", "ACGTATC")))
        with self.assertRaises(DescriptorError):
            d2(zero, r)
        with self.assertRaises(DescriptorError):
            d3(ones, r)

    def test_known_values(self):
        """Test hand-computed distances."""
        x = np.zeros(16)
        y = np.zeros(16)
        x[0], y[1] = 1.0, 1.0
        self.assertAlmostEqual(d1(x, y), 2 ** 0.5, places=15)
        self.assertAlmostEqual(d2(x, y), 1.0, places=15)


class TestEmitWeightMatrix(unittest.TestCase):
    """Test matrix emission."""

    def test_json(self):
        """Test the {id, alpha, r} document."""
        matrix = adjacency_matrix(DnaSequence("s", "ACGTATC"))
        payload = json.loads(emit_weight_matrix("s", matrix, "json"))
        self.assertEqual(payload["id"], "s")
        self.assertEqual(payload["alpha"], 0.5)
        self.assertEqual(payload["r"], flatten(matrix).tolist())

    def test_csv(self):
        """Test the labelled 4x4 grid."""
        lines = emit_weight_matrix("s", adjacency_matrix(DnaSequence("s", "AC")), "csv").decode().splitlines()
        self.assertEqual(lines[0], ",A,C,G,T")
        self.assertEqual(lines[1], "A,0.0,1.0,0.0,0.0")
        self.assertEqual(len(lines), 5)


if __name__ == "__main__":
    unittest.main()
