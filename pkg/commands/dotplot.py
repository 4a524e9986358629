"""
Dot-matrix plot of two records.
"""

from commands.command import Command
from utils.alignment import dot_matrix, emit_dotplot
from utils.errors import AlignmentError, UsageError


class CmdDotplot(Command):
    """
    Draw the dot matrix of the first two records.

    Usage:
        dotplot [-i pair.fasta] [--window W] [--stringency S]
                [--format pbm|svg|png]

    Columns follow the first record and rows the second. A cell is marked
    when at least S of the W base pairs along its diagonal window match;
    windows running off either sequence are not drawn.
    """

    key = "dotplot"
    help_category = "Alignment"

    def add_arguments(self, parser):
        parser.add_argument("--window", type=int, default=1, help="window length (default 1)")
        parser.add_argument("--stringency", type=int, default=1, help="matches needed per window (default 1)")
        parser.add_argument("--format", choices=("pbm", "svg", "png"), default="pbm")

    def parse(self):
        if self.args.window < 1 or self.args.stringency < 1:
            raise UsageError("--window and --stringency must be positive")
        if self.args.stringency > self.args.window:
            raise UsageError(f"--stringency {self.args.stringency} exceeds --window {self.args.window}")

    def func(self):
        records = self.read_records()
        if len(records) < 2:
            raise AlignmentError(f"dotplot needs two records, got {len(records)}")
        matrix = dot_matrix(records[0], records[1], self.args.window, self.args.stringency)
        self.write_output(emit_dotplot(matrix, self.args.format))
