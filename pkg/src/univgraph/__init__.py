"""Sparse universal graphs for trees and for graphs of bounded treewidth."""

from .addressing import eat_at, eat_index, parse, render, vertex_count
from .construction import (
    HostGraph,
    admissible,
    build_tstar,
    build_universal,
    count_edges_exact,
    decompose_n,
    edge_report,
    height_for,
)
from .decomposition import DecompositionError, TreeDecomposition, normalize, validate
from .embedding import (
    AdmissibleView,
    Embedding,
    EmbeddingError,
    embed_forest,
    embed_tree_full,
    validate_embedding,
    view_of,
)
from .graphs import Graph
from .separators import (
    DeltaContext,
    SeparatorError,
    delta,
    split_bounded,
    split_bounded_tw,
    split_one_sep,
    split_one_sep_tw,
    split_three,
    split_three_tw,
    split_two_sep,
    split_two_sep_tw,
)
from .treewidth import (
    build_universal_tw,
    count_edges_tw,
    embed_graph_full_tw,
    embed_graph_tw,
    generate_partial_ktree,
    lower_bound_edges,
    normalize_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleView", "DecompositionError", "DeltaContext", "Embedding", "EmbeddingError",
    "Graph", "HostGraph", "SeparatorError", "TreeDecomposition", "admissible",
    "build_tstar", "build_universal", "build_universal_tw", "count_edges_exact",
    "count_edges_tw", "decompose_n", "delta", "eat_at", "eat_index", "edge_report",
    "embed_forest", "embed_graph_full_tw", "embed_graph_tw", "embed_tree_full",
    "generate_partial_ktree", "height_for", "lower_bound_edges", "normalize",
    "normalize_decomposition", "parse", "render", "split_bounded", "split_bounded_tw",
    "split_one_sep", "split_one_sep_tw", "split_three", "split_three_tw", "split_two_sep",
    "split_two_sep_tw", "validate", "validate_embedding", "vertex_count", "view_of",
]
