"""
Translate DNA records into protein, or emit their transcripts.
"""

from commands.command import Command
from utils.rendering import csv_bytes
from utils.sequences import base_counts, reverse_complement, transcribe, translate, write_fasta

EMIT_CHOICES = ("protein", "rna", "revcomp", "counts")


class CmdTranslate(Command):
    """
    Translate DNA through mRNA into amino acids.

    Usage:
        translate [-i genes.fasta] [--frame 0|1|2] [--three-letter]
        translate --emit rna|revcomp|counts

    Every record is transcribed (T -> U) and read codon by codon with the
    standard genetic code. Output is FASTA-like: one header per record
    carrying the reading frame and the STOP codon indices, then the protein
    with '*' at each STOP. --three-letter writes Met-Phe-Stop style names.

    Other emissions:
        rna       the transcribed mRNA
        revcomp   the reverse complement, as FASTA
        counts    CSV of A, C, G, T counts per record
    """

    key = "translate"
    help_category = "Sequences"

    def add_arguments(self, parser):
        parser.add_argument("--frame", type=int, choices=(0, 1, 2), default=0,
                            help="reading frame offset (default 0)")
        parser.add_argument("--three-letter", action="store_true",
                            help="write three-letter amino-acid names")
        parser.add_argument("--emit", choices=EMIT_CHOICES, default="protein",
                            help="what to write (default protein)")

    def func(self):
        records = self.read_records()
        emit = self.args.emit
        if emit == "counts":
            rows = []
            for record in records:
                counts = base_counts(record)
                rows.append([record.id] + [counts[base] for base in "ACGT"])
            self.write_output(csv_bytes(("id", "A", "C", "G", "T"), rows))
            return
        if emit == "revcomp":
            self.write_output(write_fasta([reverse_complement(r) for r in records]).encode("ascii"))
            return
        lines = []
        for record in records:
            rna = transcribe(record)
            if emit == "rna":
                lines += [f">{record.id}", rna.residues]
                continue
            result = translate(rna, frame=self.args.frame)
            stops = ",".join(str(index) for index in result.stop_positions) or "-"
            lines.append(f">{record.id} frame={result.frame} stops={stops} leftover={result.leftover}")
            lines.append("-".join(result.three_letter()) if self.args.three_letter else result.protein)
        self.write_output(("\n".join(lines) + "\n").encode("ascii"))
