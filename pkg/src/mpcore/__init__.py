"""Core analysis for concurrent multi-player mean-payoff games."""

__version__ = "0.1.0"

from .config import Budget, DEFAULT_BUDGET
from .decisions import (a_core_gr1, core_nonempty, dominated, e_core_gr1, exists_beneficial_deviation,
                        membership, not_dominated_region)
from .game import (Coalition, Game, GameFormatError, Lasso, StrategyMachine, StrategyProfile,
                   build_game, parse_game, parse_profile, restrict_arena)
from .geometry import HalfSpace, Polyhedron, PolyUnion, ResourceError
from .gr1 import parse_gr1
from .payoff import compute_payoff
from .values import can_enforce, value_set

__all__ = [
    "Budget", "DEFAULT_BUDGET", "Coalition", "Game", "GameFormatError", "HalfSpace", "Lasso",
    "PolyUnion", "Polyhedron", "ResourceError", "StrategyMachine", "StrategyProfile",
    "a_core_gr1", "build_game", "can_enforce", "compute_payoff", "core_nonempty", "dominated",
    "e_core_gr1", "exists_beneficial_deviation", "membership", "not_dominated_region",
    "parse_game", "parse_gr1", "parse_profile", "restrict_arena", "value_set",
]
