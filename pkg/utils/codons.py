"""
Standard genetic code for RNA codons.

The table is loaded from Biopython's NCBI table 1.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Tuple

from Bio.Data.CodonTable import standard_rna_table
from Bio.SeqUtils import seq3

RNA_BASES = "UCAG"
STOP = "*"
STOP_NAME = "Stop"


@dataclass(frozen=True)
class CodonTable:
    """Mapping of all 64 RNA triplets to a one-letter amino acid or STOP.

    Attributes:
        name: Human readable table name.
        mapping: triplet -> one-letter code, with STOP ("*") for stop codons.
    """

    name: str
    mapping: Dict[str, str] = field(repr=False)

    def __post_init__(self):
        if len(self.mapping) != 64:
            raise ValueError(f"Codon table must have 64 entries, got {len(self.mapping)}")
        stops = self.stop_codons
        if len(stops) != 3:
            raise ValueError(f"Codon table must have 3 stop codons, got {len(stops)}")
        if len(self.amino_acids) != 20:
            raise ValueError(f"Codon table must code 20 amino acids, got {len(self.amino_acids)}")

    @classmethod
    def standard(cls) -> "CodonTable":
        """Build the standard code from Biopython's RNA table."""
        mapping = {}
        for triplet in ("".join(bases) for bases in product(RNA_BASES, repeat=3)):
            if triplet in standard_rna_table.stop_codons:
                mapping[triplet] = STOP
            else:
                mapping[triplet] = standard_rna_table.forward_table[triplet]
        return cls(name="Standard", mapping=mapping)

    @property
    def stop_codons(self) -> Tuple[str, ...]:
        return tuple(sorted(codon for codon, aa in self.mapping.items() if aa == STOP))

    @property
    def amino_acids(self) -> Tuple[str, ...]:
        return tuple(sorted({aa for aa in self.mapping.values() if aa != STOP}))

    def lookup(self, codon: str) -> str:
        """Return the one-letter code (or STOP) for an RNA triplet."""
        return self.mapping[codon]

    def is_stop(self, codon: str) -> bool:
        return self.mapping[codon] == STOP


def three_letter(code: str) -> str:
    """Three-letter name for a one-letter amino acid code ("Stop" for STOP)."""
    if code == STOP:
        return STOP_NAME
    return seq3(code)


STANDARD_CODE = CodonTable.standard()
