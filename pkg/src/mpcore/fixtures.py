"""Small reference games and profiles.

Where the source drawings leave action profiles out, the missing entries
are completed as self-loops; each case is noted next to the transition rule.
"""
from __future__ import annotations

from .game import Game, StrategyMachine, StrategyProfile, build_game, constant_profile


def two_robots() -> Game:
    """Two players must agree to visit their reward states l and r from m."""
    def tr(s, ap):
        a1, a2 = ap
        if s == "m":
            if ap == ("L", "L"):
                return "l"
            if ap == ("R", "R"):
                return "r"
            return "m"
        if s == "l":
            if a2 == "R":
                return "m"
            return "l"  # (L,L) drawn; (R,L) not drawn, completed as a self-loop
        if a1 == "L":
            return "m"
        return "r"  # (R,R) drawn; (R,L) not drawn, completed as a self-loop

    return build_game(
        players=["1", "2"],
        actions={"1": ["L", "R"], "2": ["L", "R"]},
        states=["m", "l", "r"],
        init="m",
        weights={"m": (0, 0), "l": (1, 0), "r": (0, 1)},
        transition=tr,
        labels={"m": {"m"}, "l": {"l"}, "r": {"r"}},
    )


def alternating_profile(g: Game) -> StrategyProfile:
    """Four-phase counters visiting m, l, m, r forever."""
    n = len(g.states)
    step = tuple((i + 1) % 4 for i in range(4))
    delta = tuple((step[q],) * n for q in range(4))
    names = ("q0", "q1", "q2", "q3")
    L, R = 0, 1
    p1 = StrategyMachine(names, 0, delta, (L, L, R, L))
    p2 = StrategyMachine(names, 0, delta, (L, R, R, R))
    return StrategyProfile((p1, p2))


def stuck_profile(g: Game) -> StrategyProfile:
    """Player 1 always L, player 2 always R: the play never leaves m."""
    return constant_profile(g, ["L", "R"])


_CYCLE_SUCC = {
    ("H", "H", "H"): "t", ("H", "H", "T"): "t",
    ("H", "T", "H"): "m", ("H", "T", "T"): "s",
    ("T", "H", "H"): "s", ("T", "H", "T"): "b",
    ("T", "T", "H"): "m", ("T", "T", "T"): "b",
}


def three_sinks(center=(0, 0, 0)) -> Game:
    """Three players leave s for one of three absorbing states whose payoffs
    form a cycle of preferences; ``center`` is the weight of s."""
    def tr(s, ap):
        return _CYCLE_SUCC[ap] if s == "s" else s

    hs = ["H", "T"]
    return build_game(
        players=["1", "2", "3"],
        actions={"1": hs, "2": hs, "3": hs},
        states=["s", "t", "m", "b"],
        init="s",
        weights={"s": tuple(center), "t": (2, 1, 0), "m": (0, 2, 1), "b": (1, 0, 2)},
        transition=tr,
        labels={"s": {"at_s"}, "t": {"at_t"}, "m": {"at_m"}, "b": {"at_b"}},
    )


def three_sinks_balanced() -> Game:
    """Same arena with weight (1,1,1) at s."""
    return three_sinks((1, 1, 1))


def go_to_t_profile(g: Game) -> StrategyProfile:
    return constant_profile(g, ["H", "H", "H"])


def stay_at_s_profile(g: Game) -> StrategyProfile:
    return constant_profile(g, ["H", "T", "T"])


def weak_dominance() -> Game:
    """One-shot choice into absorbing states (0,2), (0,1), (0,-1)."""
    succ = {("R", "R"): "high", ("L", "L"): "mid", ("R", "L"): "mid", ("L", "R"): "low"}

    def tr(s, ap):
        return succ[ap] if s == "s0" else s

    return build_game(
        players=["1", "2"],
        actions={"1": ["L", "R"], "2": ["L", "R"]},
        states=["s0", "high", "mid", "low"],
        init="s0",
        weights={"s0": (0, 0), "high": (0, 2), "mid": (0, 1), "low": (0, -1)},
        transition=tr,
    )


def both_left_profile(g: Game) -> StrategyProfile:
    return constant_profile(g, ["L", "L"])


def single_loop(weight: int = 0, label: str | None = None) -> Game:
    return build_game(
        players=["1"], actions={"1": ["a"]}, states=["s"], init="s",
        weights={"s": (weight,)}, transition=lambda s, ap: "s",
        labels={"s": {label}} if label else None,
    )


GAMES = {
    "two_robots": two_robots,
    "three_sinks": three_sinks,
    "three_sinks_balanced": three_sinks_balanced,
    "weak_dominance": weak_dominance,
}

PROFILES = {
    "two_robots.alternating": (two_robots, alternating_profile),
    "two_robots.stuck": (two_robots, stuck_profile),
    "three_sinks.go_to_t": (three_sinks, go_to_t_profile),
    "three_sinks_balanced.stay_at_s": (three_sinks_balanced, stay_at_s_profile),
    "weak_dominance.both_left": (weak_dominance, both_left_profile),
}
