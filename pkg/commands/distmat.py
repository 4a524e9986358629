"""
Pairwise distance matrices.
"""

import math

from commands.command import Command
from conf import settings
from utils.distances import (
    MATRIX_FORMATS, METHODS, MethodParams, check_combination, distance_matrix,
    emit_matrix, emit_ranking, rank_pairs,
)
from utils.errors import UsageError

ALL_METRICS = ("euclidean", "one_minus_cosine", "one_minus_pcc")


def method_params(command) -> MethodParams:
    """MethodParams from --alpha/--max-distance/--width, environment and settings."""
    args = command.args
    alpha = command.setting(args.alpha, "ALPHA", float)
    max_distance = command.setting(args.max_distance, "MAX_DISTANCE", int)
    width = command.setting(args.width, "WORM_WIDTH", int)
    if not (math.isfinite(alpha) and alpha > 0):
        raise UsageError(f"--alpha must be positive and finite, got {alpha}")
    if max_distance is not None and max_distance < 1:
        raise UsageError(f"--max-distance must be at least 1, got {max_distance}")
    if width is not None and width < 1:
        raise UsageError(f"--width must be at least 1, got {width}")
    return MethodParams(alpha=alpha, max_distance=max_distance, worm_width=width)


def add_method_arguments(parser):
    parser.add_argument("--method", choices=METHODS, default=settings.DEFAULT_METHOD,
                        help="descriptor to compare (default digraph)")
    parser.add_argument("--alpha", type=float, help="digraph weight exponent (default 0.5)")
    parser.add_argument("--max-distance", type=int, help="digraph: ignore pairs further apart")
    parser.add_argument("--width", type=int, help="worm grid width")


class CmdDistmat(Command):
    """
    Compute the distance matrix of a set of records.

    Usage:
        distmat [-i genes.fasta] [--method dcurve|worm|digraph]
                [--metric euclidean|one_minus_cosine|one_minus_pcc]
                [--alpha A] [--format csv|json|html] [--rank N]

    Supported combinations:
        dcurve    euclidean, one_minus_pcc
        worm      euclidean
        digraph   euclidean (d1), one_minus_cosine (d2), one_minus_pcc (d3)

    --rank N writes the N closest pairs as CSV instead of the matrix.

    Environment:
        SEQSIM_ALPHA, SEQSIM_WORKERS
    """

    key = "distmat"
    help_category = "Comparison"

    def add_arguments(self, parser):
        add_method_arguments(parser)
        parser.add_argument("--metric", choices=ALL_METRICS, default=settings.DEFAULT_METRIC)
        parser.add_argument("--format", choices=MATRIX_FORMATS, default="csv")
        parser.add_argument("--rank", type=int, metavar="N", help="write the N closest pairs instead")

    def parse(self):
        check_combination(self.args.method, self.args.metric)
        self.params = method_params(self)
        self.workers = self.setting(self.args.workers, "WORKERS", int)
        if self.workers is not None and self.workers < 1:
            raise UsageError(f"worker count must be at least 1, got {self.workers}")
        if self.args.rank is not None and self.args.rank < 1:
            raise UsageError(f"--rank must be at least 1, got {self.args.rank}")

    def func(self):
        records = self.read_records()
        matrix = distance_matrix(records, self.args.method, self.args.metric,
                                 params=self.params, workers=self.workers)
        if self.args.rank is not None:
            self.write_output(emit_ranking(rank_pairs(matrix, self.args.rank)))
            return
        self.write_output(emit_matrix(matrix, self.args.format))
