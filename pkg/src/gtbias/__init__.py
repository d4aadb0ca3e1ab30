"""Pair-counting external cluster validity indices and their ground-truth bias."""

from .indices import DEGENERATE, INDEX_IDS, RI_FAMILY, evaluate, evaluate_all
from .paircounts import ContingencyTable, PairCounts, contingency, pair_counts
from .partition import ClusterDistribution, CrispPartition, cluster_distribution, from_labels
from .theory import BiasStatus, predict_nc_bias, quadratic_entropy

__version__ = "0.1.0"

__all__ = [
    "DEGENERATE", "INDEX_IDS", "RI_FAMILY", "evaluate", "evaluate_all",
    "ContingencyTable", "PairCounts", "contingency", "pair_counts",
    "ClusterDistribution", "CrispPartition", "cluster_distribution", "from_labels",
    "BiasStatus", "predict_nc_bias", "quadratic_entropy",
]
