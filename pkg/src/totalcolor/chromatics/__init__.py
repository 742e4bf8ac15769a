"""Edge-coloring kernel: partial colorings, Kempe chains, multifans and coloring theorems."""

from .fans import ExtensionStats, Multifan, build_multifan, extend_coloring, is_linear_sequence, shift
from .partial import KempePath, PartialEdgeColoring, kempe_chain, kempe_switch
from .theorems import (
    equalize,
    equalize_with_rainbow,
    extend_rainbow_coloring_a,
    extend_rainbow_coloring_b,
    is_bipartite,
    konig_color,
    vizing_color,
)

__all__ = [
    "ExtensionStats",
    "KempePath",
    "Multifan",
    "PartialEdgeColoring",
    "build_multifan",
    "equalize",
    "equalize_with_rainbow",
    "extend_coloring",
    "extend_rainbow_coloring_a",
    "extend_rainbow_coloring_b",
    "is_bipartite",
    "is_linear_sequence",
    "kempe_chain",
    "kempe_switch",
    "konig_color",
    "shift",
    "vizing_color",
]
