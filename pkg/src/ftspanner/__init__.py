"""Fault-tolerant additive spanners of unweighted graphs, certified by exhaustive fault enumeration."""

from .cluster import augment_clusters, build_alg2_spanner, find_block_split
from .experiment import ExperimentSpec, PipelineOptions, build_pipeline, run_experiment, summarize
from .ftblocks import SourcewiseFactory, eft_multiplicative, sourcewise_ft_augment, sourcewise_ft_preserver
from .generators import generate
from .graph import (
    UNREACHABLE,
    FaultSet,
    Graph,
    GraphError,
    all_pairs_distances,
    bfs_distances,
    canonical_shortest_path,
    read_edge_list,
    write_edge_list,
)
from .sourcewise import Alg1Params, build_alg1_spanner, recommended_p, select_sources
from .spanners import (
    Claim,
    Clustering,
    Spanner,
    acim_2additive,
    bkmp_6additive,
    check_clustering_property,
    greedy_multiplicative,
)
from .union import decompose_blocks, stretch_claim, union_spanner
from .verify import EXHAUSTIVE, StretchReport, naive_verify, sampled, verify_claim, verify_sourcewise

__version__ = "0.1.0"

__all__ = [
    "UNREACHABLE",
    "Alg1Params",
    "Claim",
    "Clustering",
    "EXHAUSTIVE",
    "ExperimentSpec",
    "FaultSet",
    "Graph",
    "GraphError",
    "PipelineOptions",
    "SourcewiseFactory",
    "Spanner",
    "StretchReport",
    "acim_2additive",
    "all_pairs_distances",
    "augment_clusters",
    "bfs_distances",
    "bkmp_6additive",
    "build_alg1_spanner",
    "build_alg2_spanner",
    "build_pipeline",
    "canonical_shortest_path",
    "check_clustering_property",
    "decompose_blocks",
    "eft_multiplicative",
    "find_block_split",
    "generate",
    "greedy_multiplicative",
    "naive_verify",
    "read_edge_list",
    "recommended_p",
    "run_experiment",
    "sampled",
    "select_sources",
    "sourcewise_ft_augment",
    "sourcewise_ft_preserver",
    "stretch_claim",
    "summarize",
    "union_spanner",
    "verify_claim",
    "verify_sourcewise",
    "write_edge_list",
]
