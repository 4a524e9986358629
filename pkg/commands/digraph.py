"""
Weighted digraph descriptors.
"""

from commands.command import Command
from utils.digraph import WeightParams, adjacency_matrix, edge_list, emit_edges, emit_weight_matrix
from utils.errors import UsageError


class CmdDigraph(Command):
    """
    Compute the 4x4 weighted digraph matrix of each record.

    Usage:
        digraph [-i seq.fasta] [--alpha A] [--max-distance D]
                [--format json|csv] [--record ID] [--edges]

    Every ordered pair of positions i < j adds (j - i)^-alpha to the
    (S_i, S_j) entry. json writes {id, alpha, r} per record, r being the
    16 entries row-major over A, C, G, T. csv writes the labelled matrix of
    one record; --edges lists that record's individual edges instead.

    Environment:
        SEQSIM_ALPHA    default for --alpha
    """

    key = "digraph"
    help_category = "Descriptors"

    def add_arguments(self, parser):
        parser.add_argument("--alpha", type=float, help="weight exponent (default 0.5)")
        parser.add_argument("--max-distance", type=int, help="ignore pairs further apart than this")
        parser.add_argument("--format", choices=("json", "csv"), default="json")
        parser.add_argument("--record", help="id of the record to render")
        parser.add_argument("--edges", action="store_true", help="list individual edges as CSV")

    def parse(self):
        alpha = self.setting(self.args.alpha, "ALPHA", float)
        max_distance = self.setting(self.args.max_distance, "MAX_DISTANCE", int)
        try:
            self.params = WeightParams(alpha=alpha, max_distance=max_distance)
        except ValueError as exc:
            raise UsageError(str(exc))
        self.workers = self.setting(self.args.workers, "WORKERS", int)
        if self.workers is None:
            self.workers = 1
        elif self.workers < 1:
            raise UsageError(f"worker count must be at least 1, got {self.workers}")

    def func(self):
        records = self.read_records()
        if self.args.edges:
            self.write_output(emit_edges(edge_list(self.select_record(records), self.params)))
            return
        if self.args.format == "csv":
            record = self.select_record(records)
            matrix = adjacency_matrix(record, self.params, workers=self.workers)
            self.write_output(emit_weight_matrix(record.id, matrix, "csv"))
            return
        chunks = [
            emit_weight_matrix(record.id, adjacency_matrix(record, self.params, workers=self.workers), "json")
            for record in records
        ]
        self.write_output(b"".join(chunks))
