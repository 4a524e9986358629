"""
Sequence data model and FASTA handling.

DNA records are validated on construction: every residue is one of A, C,
G, T in uppercase. FASTA input is canonicalised (lowercase accepted) and
any other character is reported with its record id, line and column.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import IO, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from utils.codons import STANDARD_CODE, CodonTable, three_letter
from utils.errors import SequenceFormatError

logger = logging.getLogger(__name__)

DNA_BASES = "ACGT"
RNA_BASES = "ACGU"
# IUPAC codes that --strip-ambiguous is allowed to drop.
AMBIGUITY_CODES = frozenset("NRYKMSWBDHV")

_DNA_RE = re.compile(r"[ACGT]*")
_RNA_RE = re.compile(r"[ACGU]*")
_INVALID_DNA_RE = re.compile(r"[^ACGT]")
_INVALID_RNA_RE = re.compile(r"[^ACGU]")

_COMPLEMENT = str.maketrans("ACGT", "TGCA")

FastaSource = Union[str, bytes, IO]


@dataclass(frozen=True)
class DnaSequence:
    """A validated DNA record.

    Attributes:
        id: Record label (first token of the FASTA header).
        residues: Bases, uppercase, each one of A, C, G, T.
        description: Remainder of the FASTA header, if any.
    """

    id: str
    residues: str
    description: str = ""

    def __post_init__(self):
        if not _DNA_RE.fullmatch(self.residues):
            bad = _INVALID_DNA_RE.search(self.residues)
            raise SequenceFormatError(
                f"Invalid DNA residue {bad.group()!r}",
                record_id=self.id,
                position=bad.start() + 1,
            )

    @classmethod
    def from_string(cls, residues: str, id: str = "seq") -> "DnaSequence":
        """Build a record from loose text, canonicalising case."""
        return cls(id=id, residues=residues.strip().upper())

    @property
    def n(self) -> int:
        return len(self.residues)

    def __len__(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class RnaSequence:
    """A validated RNA record over A, C, G, U."""

    id: str
    residues: str

    def __post_init__(self):
        if not _RNA_RE.fullmatch(self.residues):
            bad = _INVALID_RNA_RE.search(self.residues)
            raise SequenceFormatError(
                f"Invalid RNA residue {bad.group()!r}",
                record_id=self.id,
                position=bad.start() + 1,
            )

    @property
    def n(self) -> int:
        return len(self.residues)

    def __len__(self) -> int:
        return len(self.residues)


class Translation(NamedTuple):
    """Result of reading an RNA sequence three bases at a time.

    protein holds one-letter codes with "*" at every STOP codon;
    stop_positions are the zero-based codon indices of those stops.
    """

    protein: str
    stop_positions: Tuple[int, ...]
    leftover: int
    frame: int

    @property
    def amino_acid_count(self) -> int:
        return len(self.protein) - len(self.stop_positions)

    def three_letter(self) -> List[str]:
        """Codon-by-codon names, e.g. ["Met", "Phe", "Stop"]."""
        return [three_letter(code) for code in self.protein]


def coerce_dna(value: Union[str, DnaSequence], id: str = "seq") -> DnaSequence:
    """Accept either a DnaSequence or a plain residue string."""
    if isinstance(value, DnaSequence):
        return value
    return DnaSequence.from_string(value, id=id)


def _read_text(source: FastaSource) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SequenceFormatError(f"FASTA input is not valid UTF-8: {exc.reason}")
    return source


def parse_fasta(source: FastaSource, strip_ambiguous: bool = False) -> List[DnaSequence]:
    """
    Parse FASTA text into DNA records.

    Args:
        source: Bytes, text, or a readable stream (binary or text).
        strip_ambiguous: Drop IUPAC ambiguity codes (N, R, Y, ...) instead of
            rejecting them. Any other unexpected character is still an error.

    Returns:
        One DnaSequence per record, in file order.

    Raises:
        SequenceFormatError: On a sequence line before the first header, an
            empty header, an empty record, or an invalid residue.
    """
    text = _read_text(source)
    records: List[DnaSequence] = []
    record_id: Optional[str] = None
    description = ""
    header_line = 0
    chunks: List[str] = []
    raw_position = 0

    def finish():
        residues = "".join(chunks)
        if not residues:
            raise SequenceFormatError("Empty FASTA record", record_id=record_id, line=header_line)
        records.append(DnaSequence(id=record_id, residues=residues, description=description))

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith(">"):
            if record_id is not None:
                finish()
            fields = line[1:].split(None, 1)
            if not fields:
                raise SequenceFormatError("Malformed FASTA header: no record id", line=line_no, column=1)
            record_id = fields[0]
            description = fields[1].strip() if len(fields) > 1 else ""
            header_line = line_no
            chunks = []
            raw_position = 0
            continue
        if record_id is None:
            raise SequenceFormatError(
                "Malformed FASTA: sequence data before the first '>' header",
                line=line_no,
                column=len(raw_line) - len(raw_line.lstrip()) + 1,
            )

        upper = line.upper()
        if _DNA_RE.fullmatch(upper):
            chunks.append(upper)
            raw_position += len(upper)
            continue

        # Slow path: find and report the first offending character.
        offset = len(raw_line) - len(raw_line.lstrip())
        kept = []
        for index, char in enumerate(upper):
            if char.isspace():
                continue
            raw_position += 1
            if char in DNA_BASES:
                kept.append(char)
            elif strip_ambiguous and char in AMBIGUITY_CODES:
                logger.debug("Dropped ambiguity code %s in %s at %d", char, record_id, raw_position)
            else:
                if char == "U":
                    message = "Invalid DNA residue 'U' (RNA base in DNA input)"
                else:
                    message = f"Invalid DNA residue {line[index]!r}"
                raise SequenceFormatError(
                    message,
                    record_id=record_id,
                    line=line_no,
                    column=offset + index + 1,
                    position=raw_position,
                )
        chunks.append("".join(kept))

    if record_id is not None:
        finish()
    return records


def write_fasta(records: Iterable[DnaSequence], width: int = 60) -> str:
    """
    Serialise records as FASTA text.

    Args:
        records: Sequences to write.
        width: Residues per line (must be positive).

    Returns:
        FASTA text, each record as '>' + id (+ description) and wrapped residues.
    """
    if width < 1:
        raise ValueError("FASTA line width must be positive")
    lines = []
    for record in records:
        header = f">{record.id} {record.description}" if record.description else f">{record.id}"
        lines.append(header)
        for start in range(0, len(record.residues), width):
            lines.append(record.residues[start:start + width])
    return "\n".join(lines) + "\n" if lines else ""


def dinucleotides(seq: DnaSequence) -> List[str]:
    """Return the n-1 overlapping base pairs S1S2, S2S3, ..., Sn-1Sn."""
    residues = seq.residues
    return [residues[k:k + 2] for k in range(len(residues) - 1)]


def base_counts(seq: DnaSequence) -> Dict[str, int]:
    """Count of each of A, C, G, T (zero when absent)."""
    counts = Counter(seq.residues)
    return {base: counts.get(base, 0) for base in DNA_BASES}


def transcribe(seq: DnaSequence) -> RnaSequence:
    """Replace every T with U."""
    return RnaSequence(id=seq.id, residues=seq.residues.replace("T", "U"))


def reverse_transcribe(rna: RnaSequence) -> DnaSequence:
    """Inverse of transcribe: replace every U with T."""
    return DnaSequence(id=rna.id, residues=rna.residues.replace("U", "T"))


def reverse_complement(seq: DnaSequence) -> DnaSequence:
    """Watson-Crick complement (A-T, G-C) read 3' to 5'."""
    return DnaSequence(id=seq.id, residues=seq.residues.translate(_COMPLEMENT)[::-1],
                       description=seq.description)


def translate(rna: RnaSequence, frame: int = 0, table: CodonTable = STANDARD_CODE) -> Translation:
    """
    Translate complete codons starting at `frame`.

    Args:
        rna: The messenger RNA to read.
        frame: Reading frame offset, one of 0, 1, 2.
        table: Codon table to use.

    Returns:
        Translation with the protein string, STOP codon indices and the
        number of trailing bases that did not form a full codon.
    """
    if frame not in (0, 1, 2):
        raise ValueError(f"Reading frame must be 0, 1 or 2, got {frame}")
    residues = rna.residues[frame:]
    codon_count = len(residues) // 3
    leftover = len(residues) % 3
    protein = []
    stops = []
    for index in range(codon_count):
        codon = residues[3 * index:3 * index + 3]
        if table.is_stop(codon):
            stops.append(index)
        protein.append(table.lookup(codon))
    if leftover:
        logger.debug("%s: %d trailing base(s) ignored in frame %d", rna.id, leftover, frame)
    return Translation(protein="".join(protein), stop_positions=tuple(stops), leftover=leftover, frame=frame)
