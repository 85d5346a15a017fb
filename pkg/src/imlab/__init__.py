"""Influence-maximization workbench: simulate cascades, aggregate them
into grid matrix views, compare seed-selection algorithms, and tune seed
sets interactively."""

from .diffusion import (
    AggregatedDiffusion,
    DiffusionRun,
    SeedSet,
    estimate_spread,
    exact_spread_small,
    simulate_ic,
)
from .graphs import (
    Graph,
    ProbabilityModel,
    WeightedGraph,
    assign_probabilities,
    degree_stats,
    load_graph,
)
from .grid import (
    build_grid,
    classify_rate,
    density_matrix,
    diffusion_matrix,
    influence_rate,
    subgraph_of_cells,
    trend_series,
)
from .layout import Layout, compute_layout
from .selection import ALGORITHMS, highdeg, random_seeds, sdisc, select
from .store import RunRecord, RunStore

__all__ = [
    "AggregatedDiffusion",
    "ALGORITHMS",
    "DiffusionRun",
    "Graph",
    "Layout",
    "ProbabilityModel",
    "RunRecord",
    "RunStore",
    "SeedSet",
    "WeightedGraph",
    "assign_probabilities",
    "build_grid",
    "classify_rate",
    "compute_layout",
    "degree_stats",
    "density_matrix",
    "diffusion_matrix",
    "estimate_spread",
    "exact_spread_small",
    "highdeg",
    "influence_rate",
    "load_graph",
    "random_seeds",
    "sdisc",
    "select",
    "simulate_ic",
    "subgraph_of_cells",
    "trend_series",
]

__version__ = "0.1.0"
