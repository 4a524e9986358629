"""
Distance-based tree building (UPGMA, neighbor joining) and Newick I/O.

Both builders merge the chosen pair into the lower of the two matrix
indices and drop the higher one, so the working order of the remaining
clusters never changes. Minimum searches scan the upper triangle
row-major and keep the first minimum, which breaks ties by the smallest
(row, column) index pair.
"""

import io
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from Bio import Phylo
from Bio.Phylo.NewickIO import NewickError

from conf import settings
from utils.distances import DistanceMatrix
from utils.errors import TreeError
from utils.rendering import svg_document, svg_text

logger = logging.getLogger(__name__)

TREE_ALGORITHMS = ("nj", "upgma")

_RESERVED = re.compile(r"[\s()\[\]':;,]")


@dataclass(eq=False)
class TreeNode:
    """A tree node; leaves carry a name, `length` is the branch to the parent."""

    name: Optional[str] = None
    length: Optional[float] = None
    children: List["TreeNode"] = field(default_factory=list)
    parent: Optional["TreeNode"] = field(default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def add_child(self, child: "TreeNode") -> "TreeNode":
        child.parent = self
        self.children.append(child)
        return child

    def postorder(self) -> Iterator["TreeNode"]:
        for child in self.children:
            yield from child.postorder()
        yield self

    def leaves(self) -> List["TreeNode"]:
        return [node for node in self.postorder() if node.is_leaf]


@dataclass(eq=False)
class PhyloTree:
    """A tree and whether its root is meaningful (UPGMA) or arbitrary (NJ)."""

    root: TreeNode
    rooted: bool = True

    def leaf_names(self) -> List[str]:
        return [leaf.name for leaf in self.root.leaves()]

    def nodes(self) -> List[TreeNode]:
        return list(self.root.postorder())

    def to_newick(self) -> str:
        return to_newick(self)


def _checked(matrix: DistanceMatrix, minimum: int) -> np.ndarray:
    if len(matrix) < minimum:
        raise TreeError(f"need at least {minimum} taxa, got {len(matrix)}")
    try:
        matrix.validate(tolerance=1e-12)
    except ValueError as exc:
        raise TreeError(f"invalid distance matrix: {exc}") from exc
    return matrix.values.astype(np.float64).copy()


def _closest_pair(values: np.ndarray) -> Tuple[int, int]:
    n = values.shape[0]
    masked = np.where(np.triu(np.ones((n, n), dtype=bool), k=1), values, np.inf)
    i, j = divmod(int(np.argmin(masked)), n)
    return i, j


def _drop(values: np.ndarray, index: int) -> np.ndarray:
    return np.delete(np.delete(values, index, axis=0), index, axis=1)


def _clamp(node: TreeNode, length: float) -> float:
    if length < 0:
        logger.warning("Negative branch length %.6g for %s clamped to 0", length, node.name or "internal node")
        return 0.0
    return length + 0.0


def upgma(matrix: DistanceMatrix) -> PhyloTree:
    """
    Average-linkage agglomeration into a rooted ultrametric tree.

    Each merge sits at half the distance between the merged clusters; the
    child branch lengths are that height minus each child's own height.

    Raises:
        TreeError: For fewer than 2 taxa or a matrix violating the axioms.
    """
    values = _checked(matrix, 2)
    nodes = [TreeNode(name=label) for label in matrix.labels]
    sizes = [1] * len(nodes)
    heights = [0.0] * len(nodes)
    while len(nodes) > 1:
        i, j = _closest_pair(values)
        height = values[i, j] / 2.0
        merged = TreeNode()
        for index in (i, j):
            child = nodes[index]
            child.length = max(0.0, height - heights[index]) + 0.0
            merged.add_child(child)
        total = sizes[i] + sizes[j]
        row = (sizes[i] * values[i] + sizes[j] * values[j]) / total
        values[i, :] = row
        values[:, i] = row
        values[i, i] = 0.0
        values = _drop(values, j)
        nodes[i], sizes[i], heights[i] = merged, total, height
        del nodes[j], sizes[j], heights[j]
    logger.debug("UPGMA joined %d taxa", len(matrix))
    return PhyloTree(root=nodes[0], rooted=True)


def neighbor_joining(matrix: DistanceMatrix) -> PhyloTree:
    """
    Neighbor joining with the Q-matrix criterion.

    Pairs are joined until three clusters remain; those hang from a
    trifurcating root with the three-point branch lengths. The root
    placement is arbitrary. Negative branch lengths are clamped to 0 with
    a warning.

    Raises:
        TreeError: For fewer than 3 taxa or a matrix violating the axioms.
    """
    values = _checked(matrix, 3)
    nodes = [TreeNode(name=label) for label in matrix.labels]
    while len(nodes) > 3:
        r = len(nodes)
        row_sums = values.sum(axis=1)
        q = (r - 2) * values - row_sums[:, None] - row_sums[None, :]
        i, j = _closest_pair(q)
        d_ij = values[i, j]
        length_i = d_ij / 2.0 + (row_sums[i] - row_sums[j]) / (2.0 * (r - 2))
        length_j = d_ij - length_i
        merged = TreeNode()
        nodes[i].length = _clamp(nodes[i], length_i)
        nodes[j].length = _clamp(nodes[j], length_j)
        merged.add_child(nodes[i])
        merged.add_child(nodes[j])
        row = (values[i] + values[j] - d_ij) / 2.0
        values[i, :] = row
        values[:, i] = row
        values[i, i] = 0.0
        values = _drop(values, j)
        nodes[i] = merged
        del nodes[j]

    root = TreeNode()
    d01, d02, d12 = values[0, 1], values[0, 2], values[1, 2]
    three_point = ((d01 + d02 - d12) / 2.0, (d01 + d12 - d02) / 2.0, (d02 + d12 - d01) / 2.0)
    for node, length in zip(nodes, three_point):
        node.length = _clamp(node, length)
        root.add_child(node)
    logger.debug("Neighbor joining joined %d taxa", len(matrix))
    return PhyloTree(root=root, rooted=False)


def build_tree(matrix: DistanceMatrix, algorithm: str = "nj") -> PhyloTree:
    """Dispatch to `neighbor_joining` ("nj") or `upgma`."""
    if algorithm == "nj":
        return neighbor_joining(matrix)
    if algorithm == "upgma":
        return upgma(matrix)
    raise ValueError(f"Unknown tree algorithm {algorithm!r}; choose from {', '.join(TREE_ALGORITHMS)}")


######################################################################
# Newick
######################################################################


def format_length(value: float) -> str:
    """Shortest round-trip form of a branch length, integral values without '.0'."""
    text = repr(float(value) + 0.0)
    return text[:-2] if text.endswith(".0") else text


def quote_label(label: str) -> str:
    """Single-quote a label only when it holds Newick-reserved characters."""
    if label and not _RESERVED.search(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def _newick_node(node: TreeNode) -> str:
    text = ""
    if node.children:
        text = "(" + ",".join(_newick_node(child) for child in node.children) + ")"
    if node.name is not None:
        text += quote_label(node.name)
    if node.length is not None:
        text += ":" + format_length(node.length)
    return text


def to_newick(tree: PhyloTree) -> str:
    """Newick text with branch lengths, terminated by ';'. The root carries no length."""
    root = tree.root
    saved = root.length
    root.length = None
    try:
        return _newick_node(root) + ";"
    finally:
        root.length = saved


# Bio.Phylo reads '' as two adjacent quoted tokens; hand it \' instead.
_QUOTED = re.compile(r"'((?:[^']|'')*)'")
_ESCAPE = re.compile(r"\\(.)")


def _escape_quotes(text: str) -> str:
    return _QUOTED.sub(lambda match: "'" + match.group(1).replace("''", "\\'") + "'", text)


def _from_clade(clade) -> TreeNode:
    name = clade.name
    if name is not None:
        name = _ESCAPE.sub(r"\1", name)
    node = TreeNode(name=name, length=clade.branch_length)
    for child in clade.clades:
        node.add_child(_from_clade(child))
    return node


def parse_newick(text: str) -> PhyloTree:
    """
    Parse one Newick tree with Bio.Phylo.

    Quoted labels, branch lengths and [comments] are understood. A root
    with exactly two children is reported as rooted.

    Raises:
        TreeError: On malformed text or a missing ';'.
    """
    text = text.strip()
    if not text.endswith(";"):
        raise TreeError("Newick text must end with ';'")
    try:
        parsed = Phylo.read(io.StringIO(_escape_quotes(text)), "newick")
    except (NewickError, ValueError) as exc:
        raise TreeError(f"malformed Newick: {exc}") from exc
    root = _from_clade(parsed.root)
    root.length = None
    return PhyloTree(root=root, rooted=len(root.children) == 2)


def path_distances(tree: PhyloTree) -> DistanceMatrix:
    """Leaf-to-leaf path lengths (missing lengths count as 0), leaves in tree order."""
    leaves = tree.root.leaves()
    labels = tuple(leaf.name for leaf in leaves)
    if any(label is None for label in labels):
        raise TreeError("every leaf needs a label")
    neighbours: Dict[int, List[Tuple[TreeNode, float]]] = {}
    for node in tree.root.postorder():
        for child in node.children:
            length = child.length or 0.0
            neighbours.setdefault(id(node), []).append((child, length))
            neighbours.setdefault(id(child), []).append((node, length))
    values = np.zeros((len(leaves), len(leaves)))
    position = {id(leaf): index for index, leaf in enumerate(leaves)}
    for index, leaf in enumerate(leaves):
        seen = {id(leaf)}
        queue = deque([(leaf, 0.0)])
        while queue:
            node, dist = queue.popleft()
            if id(node) in position:
                values[index, position[id(node)]] = dist
            for other, length in neighbours.get(id(node), []):
                if id(other) not in seen:
                    seen.add(id(other))
                    queue.append((other, dist + length))
    return DistanceMatrix(labels=labels, values=values)


######################################################################
# Rendering
######################################################################


def render_cladogram(tree: PhyloTree, width: Optional[int] = None) -> bytes:
    """
    Rectangular tree drawing as SVG.

    Leaves are spaced evenly top to bottom; x follows the summed branch
    lengths from the root (node depth when every length is zero).
    """
    width = settings.SVG_WIDTH if width is None else width
    margin = settings.SVG_MARGIN
    leaves = tree.root.leaves()
    spacing = 20
    height = 2 * margin + spacing * max(1, len(leaves) - 1)

    depth: Dict[int, float] = {}
    use_lengths = any((node.length or 0) > 0 for node in tree.nodes() if node is not tree.root)

    def place(node: TreeNode, base: float):
        step = (node.length or 0.0) if use_lengths else 1.0
        depth[id(node)] = 0.0 if node is tree.root else base + step
        for child in node.children:
            place(child, depth[id(node)])

    place(tree.root, 0.0)
    deepest = max(depth.values()) or 1.0
    label_room = 120
    scale = (width - 2 * margin - label_room) / deepest

    y_pos: Dict[int, float] = {}
    for index, leaf in enumerate(leaves):
        y_pos[id(leaf)] = margin + index * spacing
    for node in tree.root.postorder():
        if node.children:
            y_pos[id(node)] = sum(y_pos[id(c)] for c in node.children) / len(node.children)

    def x(node: TreeNode) -> float:
        return margin + depth[id(node)] * scale

    elements = []
    for node in tree.root.postorder():
        if node.parent is not None:
            elements.append(f'<line class="branch" x1="{x(node.parent):.2f}" y1="{y_pos[id(node)]:.2f}" '
                            f'x2="{x(node):.2f}" y2="{y_pos[id(node)]:.2f}" stroke="black" />')
        if node.children:
            ys = [y_pos[id(c)] for c in node.children]
            elements.append(f'<line class="join" x1="{x(node):.2f}" y1="{min(ys):.2f}" '
                            f'x2="{x(node):.2f}" y2="{max(ys):.2f}" stroke="black" />')
        else:
            elements.append(svg_text(x(node) + 4, y_pos[id(node)] + 4, node.name or ""))
    return svg_document(width, height, elements, title="tree")
