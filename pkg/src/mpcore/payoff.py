"""Exact mean payoffs of the lasso run induced by a finite-memory profile."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .game import (Configuration, Game, Lasso, StrategyProfile, initial_configuration,
                   profile_code, run_step)

PayoffVector = tuple[Fraction, ...]


def step_budget(g: Game, p: StrategyProfile) -> int:
    return len(g.states) * p.memory_size + 1


def _advance(g, p, c, k):
    for _ in range(k):
        c = run_step(g, p, c)
    return c


def compute_index(g: Game, p: StrategyProfile) -> tuple[int, int]:
    """Smallest ``(k, l)``, ``k < l``, with equal configurations at steps k and l.

    Brent's cycle detection: at most two configurations are held at a time.
    """
    budget = step_budget(g, p)
    c0 = initial_configuration(g, p)
    power = lam = 1
    tortoise = c0
    hare = run_step(g, p, c0)
    steps = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = run_step(g, p, hare)
        lam += 1
        steps += 1
        if steps > 4 * budget:
            raise RuntimeError("no repeated configuration within the step budget (internal error)")
    # lam is the period; find the first index of the cycle
    tortoise = c0
    hare = _advance(g, p, c0, lam)
    mu = 0
    while tortoise != hare:
        tortoise = run_step(g, p, tortoise)
        hare = run_step(g, p, hare)
        mu += 1
    if mu + lam > budget:
        raise RuntimeError("repeat index beyond the configuration-space bound (internal error)")
    return mu, mu + lam


def compute_payoff(g: Game, p: StrategyProfile) -> PayoffVector:
    k, l = compute_index(g, p)
    c = _advance(g, p, initial_configuration(g, p), k)
    totals = [0] * g.n
    for _ in range(l - k):
        for i, w in enumerate(g.weights[c.arena_state]):
            totals[i] += w
        c = run_step(g, p, c)
    return tuple(Fraction(t, l - k) for t in totals)


def induced_lasso(g: Game, p: StrategyProfile) -> Lasso:
    k, l = compute_index(g, p)
    c: Configuration = initial_configuration(g, p)
    states, codes = [], []
    for _ in range(l):
        states.append(c.arena_state)
        codes.append(profile_code(g, p, c))
        c = run_step(g, p, c)
    return Lasso(tuple(states[:k]), tuple(states[k:]), tuple(codes))


def mean_payoff_of_cycle(weights: Sequence[int]) -> Fraction:
    if not weights:
        raise ValueError("mean payoff of an empty cycle")
    return Fraction(sum(weights), len(weights))


def lasso_payoff(g: Game, lasso: Lasso) -> PayoffVector:
    return tuple(mean_payoff_of_cycle([g.weights[s][i] for s in lasso.cycle]) for i in range(g.n))


def prefix_average(g: Game, p: StrategyProfile, start: int, horizon: int) -> PayoffVector:
    """Average weight over steps ``start .. start+horizon-1`` of the run."""
    c = _advance(g, p, initial_configuration(g, p), start)
    totals = [0] * g.n
    for _ in range(horizon):
        for i, w in enumerate(g.weights[c.arena_state]):
            totals[i] += w
        c = run_step(g, p, c)
    return tuple(Fraction(t, horizon) for t in totals)
