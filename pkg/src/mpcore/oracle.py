"""Brute-force cross-checks for small games.

Both checkers enumerate small strategy families and never touch the
polyhedral machinery, so they give independent evidence. ``brute_membership``
can only refute: finding no deviation in its family does not prove a profile
is in the core.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .game import Coalition, Game, StrategyProfile, all_coalitions
from .lp import solve_lp
from .payoff import compute_payoff
from .sequentialise import enumerate_p2, count_p2, induced_subgame, sequentialise

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


@dataclass(frozen=True)
class BruteForceBudget:
    max_memoryless_profiles: int = 200_000  # deviation-graph nodes built, or player-2 strategies enumerated
    max_denominator: int = 4  # coefficients of cycle mixtures are k/D
    max_cycle_points: int = 2_000  # simple cycles per player-2 strategy
    max_period: int = 4  # longest open-loop action cycle tried as a deviation

    def __post_init__(self):
        if min(self.max_memoryless_profiles, self.max_denominator, self.max_cycle_points,
               self.max_period) <= 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class MembershipVerdict:
    answer: str  # "no" = a deviation was found; "yes" = none found in the family
    coalition: Coalition | None = None
    deviation: tuple | None = None  # per member: a state-indexed or time-indexed action tuple


def _min_mean_cycle(succ: dict, weight, src) -> Fraction:
    """Smallest mean weight of a cycle reachable from ``src`` (Karp).

    ``succ`` maps every node reachable from ``src`` to its successors; an
    edge u->v carries weight(u)."""
    nodes = list(succ)
    inf = None
    d = [{v: inf for v in nodes}]
    d[0][src] = Fraction(0)
    for _ in range(len(nodes)):
        prev, cur = d[-1], {v: inf for v in nodes}
        for u in nodes:
            if prev[u] is None:
                continue
            for v in succ[u]:
                val = prev[u] + weight(u)
                if cur[v] is None or val < cur[v]:
                    cur[v] = val
        d.append(cur)
    n = len(nodes)
    best = None
    for v in nodes:
        if d[n][v] is None:
            continue
        worst = max((d[n][v] - d[k][v]) / (n - k) for k in range(n) if d[k][v] is not None)
        if best is None or worst < best:
            best = worst
    return best


def _deviation_graph(g: Game, c: Coalition, dev, timed: bool, period: int) -> dict:
    """Moves left to the complement once the coalition's actions are fixed,
    over (arena state, phase) pairs reachable from the start."""
    mine = dict(zip(c.members, dev))
    rest = c.complement(g.n)
    choices = list(itertools.product(*(range(len(g.actions[i])) for i in rest)))
    succ = {}
    stack = [(g.init_index, 0)]
    while stack:
        node = stack.pop()
        if node in succ:
            continue
        s, k = node
        ap = [0] * g.n
        for i, d in mine.items():
            ap[i] = d[k] if timed else d[s]
        nxt = set()
        for reply in choices:
            for i, a in zip(rest, reply):
                ap[i] = a
            nxt.add((g.table[s][g.encode(ap)], (k + 1) % period))
        succ[node] = nxt
        stack.extend(nxt)
    return succ


def _deviation_family(g: Game, c: Coalition, max_period: int):
    """(timed?, period, joint deviation) triples: memoryless ones first, then
    open-loop action cycles of every length 2..max_period."""
    ns = len(g.states)
    for dev in itertools.product(*(itertools.product(range(len(g.actions[i])), repeat=ns) for i in c.members)):
        yield False, 1, dev
    for period in range(2, max_period + 1):
        for dev in itertools.product(*(itertools.product(range(len(g.actions[i])), repeat=period)
                                       for i in c.members)):
            if any(len(set(d)) > 1 for d in dev):  # constant sequences are memoryless
                yield True, period, dev


def brute_membership(g: Game, p: StrategyProfile, budget: BruteForceBudget = BruteForceBudget()) -> MembershipVerdict:
    """Look for a coalition and a deviation that beats the current payoff
    for every member whatever the others do. Deviations are memoryless or
    open-loop action cycles of length up to ``max_period``; the others may
    use any strategy, which on the fixed deviation amounts to choosing a
    path, so each member's worst case is a minimum mean cycle."""
    x = compute_payoff(g, p)
    spent = 0
    for c in all_coalitions(g.n):
        for timed, period, dev in _deviation_family(g, c, budget.max_period):
            succ = _deviation_graph(g, c, dev, timed, period)
            spent += len(succ)
            if spent > budget.max_memoryless_profiles:
                return MembershipVerdict(INCONCLUSIVE)
            if all(_min_mean_cycle(succ, lambda v: g.weights[v[0]][i], (g.init_index, 0)) > x[i]
                   for i in c.members):
                return MembershipVerdict(NO, c, dev)
    return MembershipVerdict(YES)


def _mixtures(k: int, d: int):
    """Coefficient vectors of length k with entries j/d summing to one."""
    for cut in itertools.combinations(range(d + k - 1), k - 1):
        parts, prev = [], -1
        for c in cut + (d + k - 1,):
            parts.append(c - prev - 1)
            prev = c
        yield [Fraction(q, d) for q in parts]


def _mixture_reaches(pts, x, max_points: int, d: int) -> bool:
    for k in range(1, min(max_points, len(pts)) + 1):
        for combo in itertools.combinations(pts, k):
            for lam in _mixtures(k, d):
                if all(sum(l * p[i] for l, p in zip(lam, combo)) >= x[i] for i in range(len(x))):
                    return True
    return False


def _lp_reaches(points: list[tuple[Fraction, ...]], x: Sequence[Fraction], rng: random.Random) -> bool:
    """Exact feasibility of sum l_j p_j >= x, sum l_j = 1, l >= 0, rows shuffled."""
    k, dim = len(points), len(x)
    rows = [([-p[i] for p in points], -x[i]) for i in range(dim)]
    rng.shuffle(rows)
    order = list(range(k))
    rng.shuffle(order)
    a_ub = [[r[0][j] for j in order] for r in rows]
    res = solve_lp([0] * k, a_ub, [r[1] for r in rows], [[1] * k], [1], nonneg=[True] * k)
    return res.feasible


def brute_enforce(g: Game, c: Coalition, s: int, x: Sequence[Fraction],
                  budget: BruteForceBudget = BruteForceBudget()) -> str:
    """Can coalition ``c`` guarantee at least ``x`` from ``s``?

    For every memoryless player-2 strategy, some strongly connected part of
    the remaining graph must have a mixture of at most |C|+1 simple-cycle
    averages, with coefficients in steps of 1/D, dominating ``x``. When no
    mixture is found, an exact LP over all cycles decides whether the
    failure is genuine ("no") or due to the step size ("inconclusive").
    """
    x = [Fraction(v) for v in x]
    m = sequentialise(g, c)
    if count_p2(m) > budget.max_memoryless_profiles:
        return INCONCLUSIVE
    rng = random.Random(0)
    d = budget.max_denominator
    inconclusive = False
    for s2 in enumerate_p2(m):
        graph = nx.DiGraph()
        for u, vs in induced_subgame(m, s2).items():
            graph.add_node(u)
            graph.add_edges_from((u, v) for v in vs)
        live = graph.subgraph(nx.descendants(graph, s) | {s})
        groups = []
        total = 0
        for comp in nx.strongly_connected_components(live):
            sub = live.subgraph(comp)
            pts = []
            for cyc in nx.simple_cycles(sub):
                total += 1
                if total > budget.max_cycle_points:
                    return INCONCLUSIVE
                ws = [m.weight(u) for u in cyc]
                pts.append(tuple(Fraction(sum(w[i] for w in ws), len(ws)) for i in range(len(x))))
            if pts:
                groups.append(sorted(set(pts)))
        if any(_mixture_reaches(pts, x, len(c) + 1, d) for pts in groups):
            continue
        if any(_lp_reaches(pts, x, rng) for pts in groups):
            inconclusive = True
        else:
            return NO
    return INCONCLUSIVE if inconclusive else YES
