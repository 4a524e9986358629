"""
Exception types shared by the seqsim service modules.

Every data error subclasses ValueError as well, so callers that only care
about "bad input" can keep catching that.
"""

from typing import Optional


class SeqSimError(Exception):
    """Base class for all seqsim errors."""


class UsageError(SeqSimError):
    """Command-line usage problem (bad flag, invalid combination)."""


class SequenceFormatError(SeqSimError, ValueError):
    """Malformed FASTA input or a residue outside the alphabet.

    Attributes:
        record_id: Id of the offending record, if one had been read.
        line: 1-based input line number, if known.
        column: 1-based column within that line, if known.
        position: 1-based residue position within the record, if known.
    """

    def __init__(
        self,
        message: str,
        record_id: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
        position: Optional[int] = None,
    ):
        self.record_id = record_id
        self.line = line
        self.column = column
        self.position = position
        location = []
        if record_id is not None:
            location.append(f"record {record_id!r}")
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if position is not None:
            location.append(f"position {position}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class DescriptorError(SeqSimError, ValueError):
    """A descriptor or similarity value is undefined for the given input."""


class AlignmentError(SeqSimError, ValueError):
    """Invalid scoring scheme or alignment input."""


class MatrixError(SeqSimError, ValueError):
    """A distance matrix is malformed or violates the matrix axioms."""


class TreeError(SeqSimError, ValueError):
    """Tree construction or Newick parsing failed."""


class PipelineError(SeqSimError, ValueError):
    """A pipeline stage failed; `stage` names which one."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage} stage: {message}")
