"""
Command sets

All subcommands are grouped in a cmdset. `run()` builds the argument
parser from the cmdset, dispatches to the selected command and turns
errors into exit codes:

    0  success
    1  usage error (bad flag, invalid combination, bad environment value)
    2  data error (malformed input, undefined descriptor, failed stage)

To create new commands to populate the cmdset, see
`commands/command.py`.

"""

import argparse
import contextlib
import io
import logging
import sys
from typing import Dict, List, Optional, Type

from commands.align import CmdAlign
from commands.command import Command
from commands.dcurve import CmdDCurve
from commands.digraph import CmdDigraph
from commands.distmat import CmdDistmat
from commands.dotplot import CmdDotplot
from commands.pipeline import CmdPipeline
from commands.translate import CmdTranslate
from commands.tree import CmdTree
from commands.worm import CmdWorm
from utils.errors import SeqSimError, UsageError

PROG = "seqsim"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class CmdSet:
    """An ordered collection of commands keyed by name and alias."""

    key = "Default"

    def __init__(self):
        self.commands: List[Type[Command]] = []
        self.at_cmdset_creation()

    def at_cmdset_creation(self):
        pass

    def add(self, cmdclass: Type[Command]):
        self.commands.append(cmdclass)

    def lookup(self) -> Dict[str, Type[Command]]:
        table = {}
        for cmdclass in self.commands:
            table[cmdclass.key] = cmdclass
            for alias in cmdclass.aliases:
                table[alias] = cmdclass
        return table


class SeqSimCmdSet(CmdSet):
    """
    Every subcommand of the seqsim command line.
    """

    key = "SeqSim"

    def at_cmdset_creation(self):
        """
        Populates the cmdset
        """
        # Sequences
        self.add(CmdTranslate)
        # Descriptors
        self.add(CmdDCurve)
        self.add(CmdWorm)
        self.add(CmdDigraph)
        # Alignment
        self.add(CmdAlign)
        self.add(CmdDotplot)
        # Comparison
        self.add(CmdDistmat)
        self.add(CmdTree)
        self.add(CmdPipeline)


class SeqSimArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common_arguments(parser):
    parser.add_argument("-i", "--input", help="input file (default: stdin)")
    parser.add_argument("-o", "--output", help="output file (default: stdout)")
    parser.add_argument("--strip-ambiguous", action="store_true",
                        help="drop IUPAC ambiguity codes (N, R, Y, ...) instead of failing")
    parser.add_argument("--workers", type=int, help="worker threads (default: available CPUs)")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress to stderr (-vv for debug)")


def command_overview(cmdset: CmdSet) -> str:
    """Subcommand keys grouped by help_category, in cmdset order."""
    groups: Dict[str, List[str]] = {}
    for cmdclass in cmdset.commands:
        groups.setdefault(cmdclass.help_category, []).append(cmdclass.key)
    lines = ["commands by category:"]
    lines += [f"  {category}: {', '.join(keys)}" for category, keys in groups.items()]
    return "\n".join(lines)


def build_parser(cmdset: CmdSet, instances: Dict[str, Command]) -> SeqSimArgumentParser:
    parser = SeqSimArgumentParser(
        prog=PROG,
        description="Alignment-free and alignment-based DNA sequence comparison.",
        epilog=command_overview(cmdset),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for cmdclass in cmdset.commands:
        command = instances[cmdclass.key]
        sub = subparsers.add_parser(
            cmdclass.key,
            aliases=list(cmdclass.aliases),
            help=cmdclass.summary(),
            description=cmdclass.__doc__,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        _add_common_arguments(sub)
        command.add_arguments(sub)
        sub.set_defaults(cmdclass_key=cmdclass.key)
    return parser


def _configure_logging(stderr, verbosity: int) -> logging.Handler:
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.addHandler(handler)
    if verbosity >= 2:
        root.setLevel(logging.DEBUG)
    elif verbosity == 1:
        root.setLevel(logging.INFO)
    else:
        root.setLevel(logging.WARNING)
    return handler


def run(argv: List[str], stdin=None, stdout=None, stderr=None) -> int:
    """
    Execute one command line.

    Args:
        argv: Arguments after the program name.
        stdin: Binary input stream (default: sys.stdin.buffer).
        stdout: Binary output stream (default: sys.stdout.buffer).
        stderr: Text stream for diagnostics (default: sys.stderr).

    Returns:
        Process exit code.
    """
    stdin = sys.stdin.buffer if stdin is None else stdin
    stdout = sys.stdout.buffer if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr

    cmdset = SeqSimCmdSet()
    instances = {cmdclass.key: cmdclass(stdin, stdout, stderr) for cmdclass in cmdset.commands}
    parser = build_parser(cmdset, instances)

    help_text = io.StringIO()
    try:
        with contextlib.redirect_stdout(help_text):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version print and exit through argparse
        stdout.write(help_text.getvalue().encode("utf-8"))
        return EXIT_OK if not exc.code else EXIT_USAGE
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        stderr.write(parser.format_usage())
        return EXIT_USAGE

    command = instances[args.cmdclass_key]
    command.args = args
    previous_level = logging.getLogger().level
    handler = _configure_logging(stderr, args.verbose)
    try:
        command.parse()
        command.func()
    except UsageError as exc:
        command.msg(f"{PROG} {command.key}: {exc}")
        return EXIT_USAGE
    except (SeqSimError, ValueError, OSError) as exc:
        command.msg(f"{PROG} {command.key}: error: {exc}")
        return EXIT_DATA
    finally:
        logging.getLogger().removeHandler(handler)
        logging.getLogger().setLevel(previous_level)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
