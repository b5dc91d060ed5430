"""Intrinsically dynamic community detection on diachronic link data.

Builds temporal graphs whose vertices are (node, timestep) pairs, clusters
them by modularity optimization, and measures the resulting temporal
communities and per-node behavior.  Includes a planted-community synthetic
benchmark generator and a CLI pipeline (`dyncomm`).
"""

from .detection import (
    Cover,
    CoverMismatchError,
    GraphSizeError,
    ModularityView,
    UndefinedModularityError,
    brute_force_best,
    girvan_newman,
    louvain,
    modularity,
    read_cover,
    write_cover,
)
from .generator import (
    ConfigError,
    GeneratorConfig,
    SweepCell,
    generate,
    read_assignment,
    sweep,
    write_assignment,
)
from .metrics import (
    CommunityReport,
    NodeReport,
    community_reports,
    community_size,
    dissimilarity,
    heterogeneity,
    node_activity,
    node_reports,
    self_citation,
    write_community_csv,
    write_node_csv,
)
from .repair import MergeStep, repair, write_trace
from .temporal_graph import (
    LinkParseError,
    LinkValidationError,
    PERMISSIVE,
    PhysicalGraph,
    STRICT_CITATION,
    TemporalGraph,
    TemporalLink,
    TemporalNode,
    build_temporal_graph,
    coarsen_time,
    parse_link_file,
    parse_links,
    project_physical,
    write_links,
)

__all__ = [
    "ConfigError",
    "Cover",
    "CoverMismatchError",
    "CommunityReport",
    "GeneratorConfig",
    "GraphSizeError",
    "LinkParseError",
    "LinkValidationError",
    "MergeStep",
    "ModularityView",
    "NodeReport",
    "PERMISSIVE",
    "PhysicalGraph",
    "STRICT_CITATION",
    "SweepCell",
    "TemporalGraph",
    "TemporalLink",
    "TemporalNode",
    "UndefinedModularityError",
    "brute_force_best",
    "build_temporal_graph",
    "coarsen_time",
    "community_reports",
    "community_size",
    "dissimilarity",
    "generate",
    "girvan_newman",
    "heterogeneity",
    "louvain",
    "modularity",
    "node_activity",
    "node_reports",
    "parse_link_file",
    "parse_links",
    "project_physical",
    "read_assignment",
    "read_cover",
    "repair",
    "self_citation",
    "sweep",
    "write_assignment",
    "write_community_csv",
    "write_cover",
    "write_links",
    "write_node_csv",
    "write_trace",
]

__version__ = "0.1.0"
