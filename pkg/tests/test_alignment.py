"""
Tests for dot plots and Needleman-Wunsch / Smith-Waterman alignment.
"""

import random
import unittest
from functools import lru_cache

from utils.alignment import (
    AlignmentResult,
    ScoringScheme,
    dot_matrix,
    emit_alignment,
    emit_dotplot,
    needleman_wunsch,
    smith_waterman,
)
from utils.errors import AlignmentError
from utils.sequences import DnaSequence

SCHEME = ScoringScheme(match=1, mismatch=-1, gap=-2)


def column_score(x, y, scheme=SCHEME):
    if x == "-" or y == "-":
        return scheme.gap
    return scheme.match if x == y else scheme.mismatch


def enumerate_global(a, b):
    """Yield every global alignment of a and b as column lists."""
    if not a and not b:
        yield []
        return
    if a and b:
        for rest in enumerate_global(a[1:], b[1:]):
            yield [(a[0], b[0])] + rest
    if a:
        for rest in enumerate_global(a[1:], b):
            yield [(a[0], "-")] + rest
    if b:
        for rest in enumerate_global(a, b[1:]):
            yield [("-", b[0])] + rest


def exhaustive_global_score(a, b):
    return max(sum(column_score(x, y) for x, y in columns) for columns in enumerate_global(a, b))


@lru_cache(maxsize=None)
def recursive_global_score(a, b):
    if not a:
        return len(b) * SCHEME.gap
    if not b:
        return len(a) * SCHEME.gap
    return max(
        recursive_global_score(a[1:], b[1:]) + column_score(a[0], b[0]),
        recursive_global_score(a[1:], b) + SCHEME.gap,
        recursive_global_score(a, b[1:]) + SCHEME.gap,
    )


def substrings(s):
    return {s[i:j] for i in range(len(s) + 1) for j in range(i, len(s) + 1)}


def local_oracle(a, b):
    return max(0, max(recursive_global_score(x, y) for x in substrings(a) for y in substrings(b)))


def random_residues(rng, max_length):
    return "".join(rng.choice("ACGT") for _ in range(rng.randint(0, max_length)))


class TestScoringScheme(unittest.TestCase):
    """Test scheme validation."""

    def test_defaults(self):
        """Test the +1/-1/-2 default."""
        scheme = ScoringScheme()
        self.assertEqual((scheme.match, scheme.mismatch, scheme.gap), (1, -1, -2))

    def test_invalid_values(self):
        """Test that out-of-range scores are refused."""
        for kwargs in ({"match": 0}, {"mismatch": 1}, {"gap": 1}, {"match": 1.5}):
            with self.assertRaises(AlignmentError):
                ScoringScheme(**kwargs)


class TestNeedlemanWunsch(unittest.TestCase):
    """Test global alignment."""

    def test_identity(self):
        """Test that identical sequences align without gaps."""
        result = needleman_wunsch(DnaSequence("a", "ACGT"), DnaSequence("b", "ACGT"))
        self.assertEqual(result.score, 4)
        self.assertEqual((result.aligned_a, result.aligned_b), ("ACGT", "ACGT"))
        self.assertEqual(result.midline, "||||")

    def test_one_gap(self):
        """Test three matches and a gap."""
        result = needleman_wunsch(DnaSequence("a", "ACGT"), DnaSequence("b", "ACG"))
        self.assertEqual(result.score, 1)
        self.assertEqual(result.recompute_score(SCHEME), 1)

    def test_empty_input(self):
        """Test the forced all-gap alignment."""
        result = needleman_wunsch(DnaSequence("a", ""), DnaSequence("b", "AC"))
        self.assertEqual(result.score, -4)
        self.assertEqual((result.aligned_a, result.aligned_b), ("--", "AC"))
        both_empty = needleman_wunsch(DnaSequence("a", ""), DnaSequence("b", ""))
        self.assertEqual((both_empty.score, both_empty.aligned_a), (0, ""))

    def test_tie_break_prefers_diagonal(self):
        """Test deterministic traceback on a tie."""
        result = needleman_wunsch("AC", "AG")
        self.assertEqual((result.aligned_a, result.aligned_b), ("AC", "AG"))
        self.assertEqual(result.score, 0)

    def test_exhaustive_oracle(self):
        """Test scores against enumeration of every global alignment."""
        rng = random.Random(47)
        for _ in range(500):
            a = random_residues(rng, 5)
            b = random_residues(rng, 5)
            result = needleman_wunsch(a, b)
            self.assertEqual(result.score, exhaustive_global_score(a, b), msg=f"{a!r} vs {b!r}")
            self.assertEqual(result.recompute_score(SCHEME), result.score)
            self.assertEqual(result.aligned_a.replace("-", ""), a)
            self.assertEqual(result.aligned_b.replace("-", ""), b)
            self.assertEqual(len(result.aligned_a), len(result.aligned_b))
            for x, y in zip(result.aligned_a, result.aligned_b):
                self.assertFalse(x == "-" and y == "-")
            self.assertEqual(needleman_wunsch(b, a).score, result.score)

    def test_custom_scheme(self):
        """Test a non-default scheme."""
        scheme = ScoringScheme(match=2, mismatch=0, gap=-1)
        result = needleman_wunsch("ACGT", "AGT", scheme)
        self.assertEqual(result.score, 5)
        self.assertEqual(result.recompute_score(scheme), 5)

    def test_length_limit(self):
        """Test that over-long inputs are refused."""
        with self.assertRaises(AlignmentError):
            needleman_wunsch("ACGTACGT", "ACGT", max_length=5)


class TestSmithWaterman(unittest.TestCase):
    """Test local alignment."""

    def test_no_similarity(self):
        """Test clamping at zero."""
        result = smith_waterman(DnaSequence("a", "AAAA"), DnaSequence("b", "CCCC"))
        self.assertEqual(result.score, 0)
        self.assertEqual((result.aligned_a, result.aligned_b), ("", ""))

    def test_first_maximum_in_scan_order(self):
        """Test that the first maximal cell row-major wins."""
        result = smith_waterman(DnaSequence("a", "GGTT"), DnaSequence("b", "TTGG"))
        self.assertEqual(result.score, 2)
        self.assertEqual((result.aligned_a, result.aligned_b), ("GG", "GG"))
        self.assertEqual((result.a_start, result.a_end, result.b_start, result.b_end), (0, 2, 2, 4))

    def test_self_alignment(self):
        """Test that SW(s, s) = match * |s|."""
        rng = random.Random(53)
        for _ in range(50):
            s = random_residues(rng, 30) or "A"
            self.assertEqual(smith_waterman(s, s).score, len(s))

    def test_exhaustive_oracle(self):
        """Test scores against the best global score over all substring pairs."""
        rng = random.Random(59)
        for _ in range(500):
            a = random_residues(rng, 5)
            b = random_residues(rng, 5)
            result = smith_waterman(a, b)
            self.assertEqual(result.score, local_oracle(a, b), msg=f"{a!r} vs {b!r}")
            self.assertGreaterEqual(result.score, 0)
            self.assertEqual(result.recompute_score(SCHEME), result.score)
            self.assertEqual(result.aligned_a.replace("-", ""), a[result.a_start:result.a_end])
            self.assertEqual(result.aligned_b.replace("-", ""), b[result.b_start:result.b_end])
            self.assertEqual(smith_waterman(b, a).score, result.score)


class TestDotMatrix(unittest.TestCase):
    """Test windowed dot plots."""

    def test_equal_bases(self):
        """Test the w = s = 1 equality rule."""
        matrix = dot_matrix("ACA", "ACA")
        self.assertEqual(matrix.shape, (3, 3))
        for i in range(3):
            self.assertTrue(matrix[i, i])
        self.assertTrue(matrix[0, 2])
        self.assertTrue(matrix[2, 0])
        self.assertFalse(matrix[0, 1])

    def test_no_matches(self):
        """Test an all-false grid."""
        self.assertFalse(dot_matrix("AAAA", "CCCC").grid.any())

    def test_window(self):
        """Test a 2-base window at full stringency."""
        matrix = dot_matrix("ACGT", "ACGT", window=2, stringency=2)
        self.assertEqual(matrix.shape, (3, 3))
        self.assertEqual(matrix.grid.tolist(), [[True, False, False], [False, True, False], [False, False, True]])

    def test_rows_follow_second_sequence(self):
        """Test grid orientation."""
        matrix = dot_matrix("AAC", "CA")
        self.assertEqual(matrix.shape, (2, 3))
        self.assertEqual(matrix.grid.tolist(), [[False, False, True], [True, True, False]])

    def test_window_count_oracle(self):
        """Test against counting matches in each window."""
        rng = random.Random(61)
        for _ in range(50):
            s1 = random_residues(rng, 20) or "A"
            s2 = random_residues(rng, 20) or "C"
            window = rng.randint(1, 4)
            stringency = rng.randint(1, window)
            grid = dot_matrix(s1, s2, window, stringency).grid
            self.assertEqual(grid.shape, (max(0, len(s2) - window + 1), max(0, len(s1) - window + 1)))
            for i in range(grid.shape[0]):
                for j in range(grid.shape[1]):
                    hits = sum(s2[i + k] == s1[j + k] for k in range(window))
                    self.assertEqual(bool(grid[i, j]), hits >= stringency)

    def test_invalid_stringency(self):
        """Test stringency above the window."""
        with self.assertRaises(AlignmentError):
            dot_matrix("ACGT", "ACGT", window=2, stringency=3)


class TestEmission(unittest.TestCase):
    """Test alignment and dot plot rendering."""

    def test_emit_alignment(self):
        """Test the header, rows and midline."""
        result = AlignmentResult(score=1, aligned_a="ACGT", aligned_b="ACG-", a_start=0, a_end=4,
                                 b_start=0, b_end=3)
        lines = emit_alignment(result, "x", "y").splitlines()
        self.assertEqual(lines[0], "# global score=1 x=0..4 y=0..3")
        self.assertEqual(lines[1:], ["ACGT", "||| ", "ACG-"])

    def test_pbm(self):
        """Test the plain bitmap header and rows."""
        text = emit_dotplot(dot_matrix("AC", "A"), "pbm").decode()
        self.assertEqual(text, "P1\n2 1\n1 0\n")

    def test_svg_and_png(self):
        """Test one rectangle per dot and a PNG signature."""
        matrix = dot_matrix("ACA", "ACA")
        svg = emit_dotplot(matrix, "svg").decode()
        self.assertEqual(svg.count('fill="black"'), int(matrix.grid.sum()))
        self.assertTrue(emit_dotplot(matrix, "png").startswith(b"\x89PNG"))


if __name__ == "__main__":
    unittest.main()
