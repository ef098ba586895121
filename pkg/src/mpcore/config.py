"""Budgets shared by the solvers. Exceeding one raises ``ResourceError``."""
from __future__ import annotations

from dataclasses import dataclass

from .geometry import MAX_FACET_DIM


@dataclass(frozen=True)
class Budget:
    max_cycles: int = 100_000  # simple cycles per strongly connected component
    max_p2_strategies: int = 100_000  # reduced player-2 strategies per value set
    max_facet_dim: int = MAX_FACET_DIM  # facet enumeration refused above this
    max_search_nodes: int = 200_000  # branch nodes in one improvement search
    max_subsets: int = 4096  # state subsets tried by path-wise E-Core
    max_cuts: int = 10_000  # refinement rounds in the non-emptiness search


DEFAULT_BUDGET = Budget()
