"""
Compiled dynamic-programming fill loops for pairwise alignment.

Both kernels take the sequences as uint8 base codes and return the full
score matrix (int64) plus a trace matrix (int8) holding the move that
produced each cell. Ties are resolved diagonal > up > left at fill time,
so the traceback only follows stored moves.
"""

import numpy as np
from numba import njit

TRACE_STOP = 0
TRACE_DIAG = 1
TRACE_UP = 2
TRACE_LEFT = 3


@njit(cache=True)
def global_fill(a, b, match, mismatch, gap):
    """Needleman-Wunsch fill; rows follow `a`, columns follow `b`."""
    rows = a.shape[0] + 1
    cols = b.shape[0] + 1
    score = np.zeros((rows, cols), dtype=np.int64)
    trace = np.zeros((rows, cols), dtype=np.int8)
    for i in range(1, rows):
        score[i, 0] = i * gap
        trace[i, 0] = TRACE_UP
    for j in range(1, cols):
        score[0, j] = j * gap
        trace[0, j] = TRACE_LEFT
    for i in range(1, rows):
        for j in range(1, cols):
            if a[i - 1] == b[j - 1]:
                best = score[i - 1, j - 1] + match
            else:
                best = score[i - 1, j - 1] + mismatch
            move = TRACE_DIAG
            up = score[i - 1, j] + gap
            if up > best:
                best = up
                move = TRACE_UP
            left = score[i, j - 1] + gap
            if left > best:
                best = left
                move = TRACE_LEFT
            score[i, j] = best
            trace[i, j] = move
    return score, trace


@njit(cache=True)
def local_fill(a, b, match, mismatch, gap):
    """
    Smith-Waterman fill with cells clamped at zero.

    Returns the matrices and the first maximal cell in row-major order.
    """
    rows = a.shape[0] + 1
    cols = b.shape[0] + 1
    score = np.zeros((rows, cols), dtype=np.int64)
    trace = np.zeros((rows, cols), dtype=np.int8)
    best_i = 0
    best_j = 0
    best_score = 0
    for i in range(1, rows):
        for j in range(1, cols):
            if a[i - 1] == b[j - 1]:
                best = score[i - 1, j - 1] + match
            else:
                best = score[i - 1, j - 1] + mismatch
            move = TRACE_DIAG
            up = score[i - 1, j] + gap
            if up > best:
                best = up
                move = TRACE_UP
            left = score[i, j - 1] + gap
            if left > best:
                best = left
                move = TRACE_LEFT
            if best <= 0:
                best = 0
                move = TRACE_STOP
            score[i, j] = best
            trace[i, j] = move
            if best > best_score:
                best_score = best
                best_i = i
                best_j = j
    return score, trace, best_i, best_j
