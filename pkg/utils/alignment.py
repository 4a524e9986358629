"""
Classical pairwise comparison: dot-matrix plots, Needleman-Wunsch global
alignment and Smith-Waterman local alignment under a linear gap model.

The DP matrices are filled by the compiled kernels in `utils.kernels`;
this module validates input, runs the traceback and renders results.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from conf import settings
from utils.errors import AlignmentError
from utils.kernels import TRACE_DIAG, TRACE_LEFT, TRACE_STOP, TRACE_UP, global_fill, local_fill
from utils.rendering import png_grid, svg_document
from utils.sequences import DnaSequence, coerce_dna

logger = logging.getLogger(__name__)

GAP_SYMBOL = "-"


@dataclass(frozen=True)
class ScoringScheme:
    """Linear-gap scoring: match > 0, mismatch <= 0, gap <= 0."""

    match: int = 1
    mismatch: int = -1
    gap: int = -2

    def __post_init__(self):
        for name in ("match", "mismatch", "gap"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise AlignmentError(f"{name} score must be an integer, got {value!r}")
        if self.match <= 0:
            raise AlignmentError(f"match score must be positive, got {self.match}")
        if self.mismatch > 0:
            raise AlignmentError(f"mismatch score must not be positive, got {self.mismatch}")
        if self.gap > 0:
            raise AlignmentError(f"gap score must not be positive, got {self.gap}")

    def column(self, x: str, y: str) -> int:
        """Score of one alignment column."""
        if x == GAP_SYMBOL or y == GAP_SYMBOL:
            return self.gap
        return self.match if x == y else self.mismatch


DEFAULT_SCHEME = ScoringScheme()


@dataclass(frozen=True)
class AlignmentResult:
    """An alignment of two sequences.

    Coordinates are zero-based and half-open: aligned_a without gaps equals
    a[a_start:a_end], likewise for b. Global alignments span both inputs.
    """

    score: int
    aligned_a: str
    aligned_b: str
    a_start: int
    a_end: int
    b_start: int
    b_end: int
    mode: str = "global"

    def __len__(self) -> int:
        return len(self.aligned_a)

    @property
    def midline(self) -> str:
        return "".join("|" if x == y and x != GAP_SYMBOL else " "
                       for x, y in zip(self.aligned_a, self.aligned_b))

    def recompute_score(self, scheme: ScoringScheme = DEFAULT_SCHEME) -> int:
        """Column-by-column score of the aligned strings."""
        return sum(scheme.column(x, y) for x, y in zip(self.aligned_a, self.aligned_b))


@dataclass(frozen=True)
class DotMatrix:
    """Boolean grid with rows following the second sequence, columns the first."""

    grid: np.ndarray
    window: int
    stringency: int

    @property
    def shape(self) -> Tuple[int, int]:
        return self.grid.shape

    def __getitem__(self, index):
        return bool(self.grid[index])


def _codes(seq: DnaSequence) -> np.ndarray:
    return np.frombuffer(seq.residues.encode("ascii"), dtype=np.uint8)


def _check_length(s1: DnaSequence, s2: DnaSequence, max_length: Optional[int]):
    limit = settings.MAX_ALIGNMENT_LENGTH if max_length is None else max_length
    for seq in (s1, s2):
        if len(seq) > limit:
            raise AlignmentError(
                f"sequence {seq.id!r} has {len(seq)} bases; alignment is limited to {limit}"
            )


def _traceback(trace: np.ndarray, s1: str, s2: str, i: int, j: int, stop_at_origin: bool):
    col_a = []
    col_b = []
    while True:
        move = trace[i, j]
        if move == TRACE_STOP or (stop_at_origin and i == 0 and j == 0):
            break
        if move == TRACE_DIAG:
            col_a.append(s1[i - 1])
            col_b.append(s2[j - 1])
            i -= 1
            j -= 1
        elif move == TRACE_UP:
            col_a.append(s1[i - 1])
            col_b.append(GAP_SYMBOL)
            i -= 1
        elif move == TRACE_LEFT:
            col_a.append(GAP_SYMBOL)
            col_b.append(s2[j - 1])
            j -= 1
    return "".join(reversed(col_a)), "".join(reversed(col_b)), i, j


def needleman_wunsch(s1, s2, scheme: ScoringScheme = DEFAULT_SCHEME,
                     max_length: Optional[int] = None) -> AlignmentResult:
    """
    Optimal global alignment.

    Args:
        s1: First sequence (DP rows).
        s2: Second sequence (DP columns).
        scheme: Scoring scheme.
        max_length: Refuse longer inputs; defaults to settings.MAX_ALIGNMENT_LENGTH.

    Returns:
        AlignmentResult whose score is the best over all global alignments.
    """
    s1, s2 = coerce_dna(s1, "a"), coerce_dna(s2, "b")
    _check_length(s1, s2, max_length)
    score, trace = global_fill(_codes(s1), _codes(s2), scheme.match, scheme.mismatch, scheme.gap)
    rows, cols = len(s1), len(s2)
    aligned_a, aligned_b, _, _ = _traceback(trace, s1.residues, s2.residues, rows, cols, True)
    logger.debug("global alignment %s/%s score %d", s1.id, s2.id, score[rows, cols])
    return AlignmentResult(
        score=int(score[rows, cols]),
        aligned_a=aligned_a,
        aligned_b=aligned_b,
        a_start=0,
        a_end=rows,
        b_start=0,
        b_end=cols,
        mode="global",
    )


def smith_waterman(s1, s2, scheme: ScoringScheme = DEFAULT_SCHEME,
                   max_length: Optional[int] = None) -> AlignmentResult:
    """
    Best local alignment.

    Traceback starts at the first maximal cell in row-major order and stops
    at the first zero cell. A zero score gives an empty alignment.
    """
    s1, s2 = coerce_dna(s1, "a"), coerce_dna(s2, "b")
    _check_length(s1, s2, max_length)
    score, trace, end_i, end_j = local_fill(_codes(s1), _codes(s2), scheme.match, scheme.mismatch, scheme.gap)
    best = int(score[end_i, end_j])
    if best == 0:
        return AlignmentResult(score=0, aligned_a="", aligned_b="", a_start=0, a_end=0,
                               b_start=0, b_end=0, mode="local")
    aligned_a, aligned_b, start_i, start_j = _traceback(trace, s1.residues, s2.residues,
                                                        int(end_i), int(end_j), False)
    return AlignmentResult(
        score=best,
        aligned_a=aligned_a,
        aligned_b=aligned_b,
        a_start=start_i,
        a_end=int(end_i),
        b_start=start_j,
        b_end=int(end_j),
        mode="local",
    )


def dot_matrix(s1, s2, window: int = 1, stringency: int = 1) -> DotMatrix:
    """
    Windowed dot plot.

    Cell (i, j) is set when at least `stringency` of the `window` base pairs
    s2[i + k], s1[j + k] (k < window) are equal. Windows running past either
    end are not evaluated, so the grid is (len2 - w + 1) x (len1 - w + 1).

    Raises:
        AlignmentError: For a non-positive window or stringency, or
            stringency > window.
    """
    if window < 1 or stringency < 1:
        raise AlignmentError("window and stringency must be positive")
    if stringency > window:
        raise AlignmentError(f"stringency {stringency} exceeds window {window}")
    s1, s2 = coerce_dna(s1, "a"), coerce_dna(s2, "b")
    rows = max(0, len(s2) - window + 1)
    cols = max(0, len(s1) - window + 1)
    if rows == 0 or cols == 0:
        return DotMatrix(grid=np.zeros((rows, cols), dtype=bool), window=window, stringency=stringency)
    equal = _codes(s2)[:, None] == _codes(s1)[None, :]
    counts = np.zeros((rows, cols), dtype=np.int64)
    for k in range(window):
        counts += equal[k:k + rows, k:k + cols]
    return DotMatrix(grid=counts >= stringency, window=window, stringency=stringency)


def emit_alignment(result: AlignmentResult, label_a: str = "a", label_b: str = "b") -> str:
    """Header line, then aligned_a, midline and aligned_b."""
    header = (f"# {result.mode} score={result.score} "
              f"{label_a}={result.a_start}..{result.a_end} {label_b}={result.b_start}..{result.b_end}")
    return "\n".join([header, result.aligned_a, result.midline, result.aligned_b]) + "\n"


def emit_dotplot(matrix: DotMatrix, fmt: str = "pbm") -> bytes:
    """
    Render a dot plot.

    Args:
        matrix: Plot to draw.
        fmt: "pbm" (plain P1 bitmap, 1 = dot), "svg" or "png".
    """
    rows, cols = matrix.shape
    if fmt == "pbm":
        lines = ["P1", f"{cols} {rows}"]
        lines += [" ".join("1" if cell else "0" for cell in row) for row in matrix.grid]
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == "svg":
        cell = 6
        elements = [
            f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" fill="black" />'
            for i, j in zip(*np.nonzero(matrix.grid))
        ]
        return svg_document(max(1, cols * cell), max(1, rows * cell), elements,
                            title=f"dot plot w={matrix.window} s={matrix.stringency}")
    if fmt == "png":
        return png_grid(matrix.grid, settings.PNG_CELL_SIZE)
    raise ValueError(f"Unknown dot plot format {fmt!r}")
