"""
Worm-curve dark spots and covariance descriptors.
"""

from commands.command import Command
from utils.errors import UsageError
from utils.worm import auto_width, covariance_descriptor, emit_descriptor, emit_spots, encode_binary, spot_set


class CmdWorm(Command):
    """
    Encode records as dark-spot grids and covariance descriptors.

    Usage:
        worm [-i seq.fasta] [--width W] [--format json|csv|svg|png|bits]
             [--record ID] [--outline]

    Bases become two bits each (A=00, G=01, C=10, T=11), laid row-major in a
    grid W columns wide (default ceil(sqrt(2n))); every 1-bit is a dark
    spot. json writes {id, width, count, mean, d} per record, d being
    [M1 M2 M3 M4]. csv/svg/png render the spots of a single record; bits
    writes the binary string of every record.
    """

    key = "worm"
    help_category = "Descriptors"

    def add_arguments(self, parser):
        parser.add_argument("--width", type=int, help="grid width (default: ceil(sqrt(bit length)))")
        parser.add_argument("--format", choices=("json", "csv", "svg", "png", "bits"), default="json")
        parser.add_argument("--record", help="id of the record to render")
        parser.add_argument("--outline", action="store_true", help="draw the grid border (svg)")

    def parse(self):
        self.width = self.setting(self.args.width, "WORM_WIDTH", int)
        if self.width is not None and self.width < 1:
            raise UsageError(f"--width must be at least 1, got {self.width}")

    def func(self):
        records = self.read_records()
        fmt = self.args.format
        if fmt == "bits":
            lines = [f">{record.id}\n{encode_binary(record).bits}" for record in records]
            self.write_output(("\n".join(lines) + "\n").encode("ascii"))
            return
        if fmt == "json":
            chunks = []
            for record in records:
                bits = encode_binary(record)
                width = self.width or auto_width(len(bits))
                chunks.append(emit_descriptor(record.id, covariance_descriptor(spot_set(bits, width)), width))
            self.write_output(b"".join(chunks))
            return
        spots = spot_set(encode_binary(self.select_record(records)), self.width)
        self.write_output(emit_spots(spots, fmt, outline=self.args.outline))
