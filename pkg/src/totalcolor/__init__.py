"""Total colorings of dense graphs with at most Δ+2 colors via good edge colorings of G^M."""

__version__ = "0.1.0"

from .errors import (
    AssertionFailure,
    ConstructionError,
    GraphFormatError,
    OutOfScopeError,
    PreconditionError,
    TotalColorError,
)
from .graph import Graph, Multigraph
from .pipeline import PipelineResult, run_pipeline
from .reduction import AugmentedGraph, build_augmented, good_coloring_to_total, plan_reduction
from .solve import RunReport, SolveResult, solve
from .verify import TotalColoring, validate_good, validate_total

__all__ = [
    "AssertionFailure",
    "AugmentedGraph",
    "ConstructionError",
    "Graph",
    "GraphFormatError",
    "Multigraph",
    "OutOfScopeError",
    "PipelineResult",
    "PreconditionError",
    "RunReport",
    "SolveResult",
    "TotalColorError",
    "TotalColoring",
    "build_augmented",
    "good_coloring_to_total",
    "plan_reduction",
    "run_pipeline",
    "solve",
    "validate_good",
    "validate_total",
]
