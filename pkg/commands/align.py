"""
Pairwise alignment of two records.
"""

from commands.command import Command
from utils.alignment import ScoringScheme, emit_alignment, needleman_wunsch, smith_waterman
from utils.errors import AlignmentError, UsageError


class CmdAlign(Command):
    """
    Align the first two records of the input.

    Usage:
        align [-i pair.fasta] [--mode global|local]
              [--match N] [--mismatch N] [--gap N]

    global runs Needleman-Wunsch, local runs Smith-Waterman, both with a
    linear gap penalty. The default scheme is match +1, mismatch -1,
    gap -2. Output is a header line with the score and the aligned spans,
    then the first record's row, a midline with '|' at matches and the
    second record's row.
    """

    key = "align"
    help_category = "Alignment"

    def add_arguments(self, parser):
        parser.add_argument("--mode", choices=("global", "local"), default="global")
        parser.add_argument("--match", type=int, help="match reward (> 0)")
        parser.add_argument("--mismatch", type=int, help="mismatch penalty (<= 0)")
        parser.add_argument("--gap", type=int, help="penalty per gap symbol (<= 0)")

    def parse(self):
        try:
            self.scheme = ScoringScheme(
                match=self.setting(self.args.match, "MATCH", int),
                mismatch=self.setting(self.args.mismatch, "MISMATCH", int),
                gap=self.setting(self.args.gap, "GAP", int),
            )
        except AlignmentError as exc:
            raise UsageError(str(exc))
        self.max_length = self.setting(None, "MAX_ALIGNMENT_LENGTH", int)

    def func(self):
        records = self.read_records()
        if len(records) < 2:
            raise AlignmentError(f"align needs two records, got {len(records)}")
        first, second = records[0], records[1]
        align = needleman_wunsch if self.args.mode == "global" else smith_waterman
        result = align(first, second, self.scheme, max_length=self.max_length)
        self.write_output(emit_alignment(result, first.id, second.id).encode("ascii"))
