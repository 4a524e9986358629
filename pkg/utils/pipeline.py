"""
Sequences -> distance matrix -> tree, with each failure tagged by stage.
"""

import logging
from typing import Optional, Sequence, Tuple

from utils.distances import DescriptorCache, DistanceMatrix, MethodParams, distance_matrix
from utils.errors import PipelineError, UsageError
from utils.phylo import TREE_ALGORITHMS, PhyloTree, build_tree
from utils.sequences import DnaSequence

logger = logging.getLogger(__name__)


def pipeline(
    seqs: Sequence[DnaSequence],
    method: str = "digraph",
    metric: str = "euclidean",
    tree_algo: str = "nj",
    params: MethodParams = MethodParams(),
    workers: Optional[int] = None,
    cache: Optional[DescriptorCache] = None,
) -> Tuple[DistanceMatrix, PhyloTree]:
    """
    Run `distance_matrix` and then the selected tree builder on its output.

    Returns:
        The matrix and the tree built from it, unchanged between stages.

    Raises:
        UsageError: For an invalid method/metric/algorithm selection.
        PipelineError: When a stage fails on the data; `stage` is
            "distance" or "tree".
    """
    if tree_algo not in TREE_ALGORITHMS:
        raise UsageError(f"unknown tree algorithm {tree_algo!r}; choose from {', '.join(TREE_ALGORITHMS)}")
    try:
        matrix = distance_matrix(seqs, method, metric, params=params, workers=workers, cache=cache)
    except UsageError:
        raise
    except ValueError as exc:
        raise PipelineError("distance", str(exc)) from exc
    logger.info("Distance stage done: %d x %d %s/%s", len(matrix), len(matrix), method, metric)
    try:
        tree = build_tree(matrix, tree_algo)
    except ValueError as exc:
        raise PipelineError("tree", str(exc)) from exc
    logger.info("Tree stage done: %s", tree_algo)
    return matrix, tree
