"""
D-curve table, projections and descriptors.
"""

import json

from commands.command import Command
from utils.dcurve import dcurve, dcurve_descriptor, emit_dcurve


class CmdDCurve(Command):
    """
    Build the dinucleotide D-curve of a record.

    Usage:
        dcurve [-i seq.fasta] [--record ID] [--format csv|svg|json]

    csv writes one row per step: k, a, b, c and the running sums a', b', c'.
    svg draws the a'-b' projection and the a', b', c' traces against k.
    json writes one line per record with the averaged descriptor
    (a'_m, b'_m, c'_m) / m and may be used with several records.
    """

    key = "dcurve"
    help_category = "Descriptors"

    def add_arguments(self, parser):
        parser.add_argument("--record", help="id of the record to render")
        parser.add_argument("--format", choices=("csv", "svg", "json"), default="csv")

    def func(self):
        records = self.read_records()
        if self.args.format == "json":
            lines = []
            for record in records:
                curve = dcurve(record)
                payload = {"id": record.id, "steps": len(curve),
                           "descriptor": dcurve_descriptor(curve).tolist()}
                lines.append(json.dumps(payload))
            self.write_output(("\n".join(lines) + "\n").encode("utf-8"))
            return
        curve = dcurve(self.select_record(records))
        self.write_output(emit_dcurve(curve, self.args.format))
