"""
Sequences to distance matrices to trees in one run.
"""

import os

from commands.command import Command
from commands.distmat import add_method_arguments, method_params
from conf import settings
from utils.distances import METHOD_METRICS, DescriptorCache, check_combination, emit_matrix
from utils.errors import UsageError
from utils.phylo import TREE_ALGORITHMS
from utils.pipeline import pipeline


class CmdPipeline(Command):
    """
    Compare records and build one tree per metric.

    Usage:
        pipeline -i genes.fasta --outdir results [--method digraph]
                 [--metric M ...] [--algo nj|upgma]

    For each metric (default: every metric the method supports) the
    distance matrix is written to <outdir>/<method>_<metric>.csv and its
    tree to <outdir>/<method>_<metric>.nwk. Descriptors are computed once
    and shared between metrics.
    """

    key = "pipeline"
    help_category = "Comparison"

    def add_arguments(self, parser):
        add_method_arguments(parser)
        parser.add_argument("--metric", action="append", dest="metrics",
                            choices=("euclidean", "one_minus_cosine", "one_minus_pcc"),
                            help="metric to run; repeat for several")
        parser.add_argument("--algo", choices=TREE_ALGORITHMS, default=settings.DEFAULT_TREE_ALGORITHM)
        parser.add_argument("--outdir", required=True, help="directory for the matrices and trees")

    def parse(self):
        self.metrics = self.args.metrics or list(METHOD_METRICS[self.args.method])
        for metric in self.metrics:
            check_combination(self.args.method, metric)
        self.params = method_params(self)
        self.workers = self.setting(self.args.workers, "WORKERS", int)
        if self.workers is not None and self.workers < 1:
            raise UsageError(f"worker count must be at least 1, got {self.workers}")

    def func(self):
        records = self.read_records()
        cache = DescriptorCache()
        # Every metric must succeed before anything is written.
        results = [
            (metric, *pipeline(records, self.args.method, metric, self.args.algo,
                               params=self.params, workers=self.workers, cache=cache))
            for metric in self.metrics
        ]
        os.makedirs(self.args.outdir, exist_ok=True)
        for metric, matrix, tree in results:
            stem = os.path.join(self.args.outdir, f"{self.args.method}_{metric}")
            self.write_output(emit_matrix(matrix, "csv"), stem + ".csv")
            self.write_output((tree.to_newick() + "\n").encode("utf-8"), stem + ".nwk")
