"""
Commands

Commands describe what a user can run from the command line. Each
subcommand is a `Command` subclass in its own module, gathered into the
command set in `commands/default_cmdsets.py`.

"""

import logging
import os
import tempfile
from typing import Any, Callable, List, Optional

from conf import get_setting
from utils.errors import SequenceFormatError, UsageError
from utils.sequences import DnaSequence, parse_fasta

logger = logging.getLogger(__name__)


class Command:
    """
    Base command (you may see this if a child command had no help text defined)

    Note that the class's `__doc__` string is used as the help text of the
    subcommand, so make sure to document consistently here. Without setting
    one, the parent's docstring will show (like now).

    """

    # Each Command class implements the following methods, called in this order
    # (only func() is actually required):
    #
    #     - add_arguments(parser): Declares the subcommand's flags.
    #     - parse(): Resolves self.args (the argparse namespace) against the
    #         environment and settings and stores the result on self.
    #     - func(): Performs the actual work.
    #
    key = None
    aliases = ()
    help_category = "General"

    def __init__(self, stdin, stdout, stderr):
        self.stdin = stdin
        self.stdout = stdout
        self.stderr = stderr
        self.args = None

    @classmethod
    def summary(cls) -> str:
        """First line of the help text."""
        doc = (cls.__doc__ or "").strip()
        return doc.splitlines()[0] if doc else ""

    def add_arguments(self, parser):
        pass

    def parse(self):
        pass

    def func(self):
        raise NotImplementedError(f"{type(self).__name__} has no func()")

    def msg(self, text: str):
        """Write a line to stderr."""
        self.stderr.write(text.rstrip("\n") + "\n")

    # Shared helpers

    def setting(self, flag_value: Any, name: str, cast: Optional[Callable] = None) -> Any:
        """Flag value if given, else SEQSIM_<name>, else conf.settings."""
        if flag_value is not None:
            return flag_value
        try:
            return get_setting(name, cast)
        except ValueError as exc:
            raise UsageError(str(exc))

    def read_input(self) -> bytes:
        path = getattr(self.args, "input", None)
        if path is None or path == "-":
            data = self.stdin.read()
            return data.encode("utf-8") if isinstance(data, str) else data
        with open(path, "rb") as handle:
            return handle.read()

    def read_records(self) -> List[DnaSequence]:
        records = parse_fasta(self.read_input(), strip_ambiguous=getattr(self.args, "strip_ambiguous", False))
        if not records:
            raise SequenceFormatError("no FASTA records in input")
        logger.info("Read %d record(s)", len(records))
        return records

    def select_record(self, records: List[DnaSequence]) -> DnaSequence:
        """The record named by --record, or the only record."""
        wanted = getattr(self.args, "record", None)
        if wanted is not None:
            for record in records:
                if record.id == wanted:
                    return record
            raise SequenceFormatError(f"no record with id {wanted!r}")
        if len(records) > 1:
            raise UsageError(f"{self.key} renders one record; pick one with --record")
        return records[0]

    def write_output(self, data: bytes, path: Optional[str] = None):
        """Write to `path` (default: -o/--output), or stdout when unset or '-'."""
        if path is None:
            path = getattr(self.args, "output", None)
        if path is None or path == "-":
            self.stdout.write(data)
            return
        atomic_write(path, data)
        logger.info("Wrote %s", path)


def atomic_write(path: str, data: bytes):
    """Write to a temporary sibling of `path`, then rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile(dir=directory, prefix=".seqsim-", delete=False)
    try:
        with handle:
            handle.write(data)
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise
