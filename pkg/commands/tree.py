"""
Trees from distance matrices.
"""

from commands.command import Command
from conf import settings
from utils.distances import parse_matrix
from utils.phylo import TREE_ALGORITHMS, build_tree, render_cladogram


class CmdTree(Command):
    """
    Build a tree from a distance matrix.

    Usage:
        tree [-i matrix.csv] [--algo nj|upgma] [--format newick|svg]
             [--input-format csv|json]

    The input is a matrix as written by distmat (CSV or JSON; detected from
    the content unless --input-format is given). nj gives an unrooted tree
    written with a trifurcating root; upgma gives a rooted ultrametric tree.
    """

    key = "tree"
    help_category = "Comparison"

    def add_arguments(self, parser):
        parser.add_argument("--algo", choices=TREE_ALGORITHMS, default=settings.DEFAULT_TREE_ALGORITHM)
        parser.add_argument("--format", choices=("newick", "svg"), default="newick")
        parser.add_argument("--input-format", choices=("csv", "json"))

    def func(self):
        text = self.read_input().decode("utf-8")
        fmt = self.args.input_format or ("json" if text.lstrip().startswith("{") else "csv")
        tree = build_tree(parse_matrix(text, fmt), self.args.algo)
        if self.args.format == "svg":
            self.write_output(render_cladogram(tree))
        else:
            self.write_output((tree.to_newick() + "\n").encode("utf-8"))
