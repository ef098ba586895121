"""Values a coalition can enforce, as unions of downward-closed polyhedra.

Everything works on the arena-level projection of the coalition's two-player
game: a memoryless player-2 strategy leaves, at each state s, a successor set
H(s) meeting every coalition-profile image. Cycles of that graph correspond
one-to-one to cycles of the alternating game, with the same averages (the
intermediate states carry duplicated weights).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .config import DEFAULT_BUDGET, Budget
from .game import Coalition, Game
from .geometry import (HalfSpace, Polyhedron, PolyUnion, ResourceError, contained_in,
                       distribute, hrep_down_conv, lp_solve, maximal_points, vec)
from .lp import OPTIMAL, UNBOUNDED, solve_lp
from .sequentialise import Responses, count_p2_reduced, enumerate_p2_reduced, p2_responses

Graph = Mapping[Hashable, Iterable[Hashable]]


def _key(v):
    return (1, v) if isinstance(v, tuple) else (0, v)


# --- graphs -----------------------------------------------------------------

def reachable(graph: Graph, v0) -> list:
    seen = {v0}
    order = [v0]
    dq = deque([v0])
    while dq:
        v = dq.popleft()
        for w in graph[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                dq.append(w)
    return order


def tarjan(nodes: Iterable, graph: Graph) -> list[list]:
    """Strongly connected components (iterative Tarjan)."""
    index: dict = {}
    low: dict = {}
    stack: list = []
    on: set = set()
    out: list[list] = []
    counter = 0
    for v0 in nodes:
        if v0 in index:
            continue
        index[v0] = low[v0] = counter
        counter += 1
        stack.append(v0)
        on.add(v0)
        work = [(v0, iter(graph[v0]))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(graph[w])))
                    break
                if w in on and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
    return out


def reachable_sccs(graph: Graph, v0) -> list[frozenset]:
    """Components reachable from ``v0`` that contain at least one edge."""
    nodes = reachable(graph, v0)
    out = []
    for comp in tarjan(nodes, graph):
        cs = frozenset(comp)
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            out.append(cs)
    return sorted(out, key=lambda c: sorted(map(_key, c)))


def scc_edges(scc: frozenset, graph: Graph) -> frozenset:
    return frozenset((u, v) for u in scc for v in graph[u] if v in scc)


def simple_cycles(scc: Iterable, graph: Graph, cap: int = DEFAULT_BUDGET.max_cycles) -> list[tuple]:
    """All simple cycles inside ``scc``, each rotated to start at its least node."""
    scc = set(scc)
    dg = nx.DiGraph()
    dg.add_nodes_from(scc)
    dg.add_edges_from((u, v) for u in scc for v in graph[u] if v in scc)
    out = []
    for cyc in nx.simple_cycles(dg):
        if len(out) >= cap:
            raise ResourceError(f"more than {cap} simple cycles in one component")
        i = min(range(len(cyc)), key=lambda j: _key(cyc[j]))
        out.append(tuple(cyc[i:] + cyc[:i]))
    return sorted(out, key=lambda c: [_key(v) for v in c])


def cycle_average(cycle: Sequence, weights: Callable | Mapping) -> tuple[Fraction, ...]:
    if not cycle:
        raise ValueError("empty cycle")
    w = weights if callable(weights) else weights.__getitem__
    rows = [w(v) for v in cycle]
    return tuple(Fraction(sum(col), len(cycle)) for col in zip(*rows))


# --- circulations -----------------------------------------------------------

def circulation_margin(edges: Sequence[tuple], weight: Callable, x: Sequence[Fraction]):
    """max t such that a unit circulation on ``edges`` has average >= x + t·1.

    Returns ``(t, z)`` with z a dict edge -> weight, or ``(None, None)`` if
    there are no edges.
    """
    edges = sorted(edges, key=lambda e: (_key(e[0]), _key(e[1])))
    if not edges:
        return None, None
    k = len(edges)
    nodes = sorted({u for e in edges for u in e}, key=_key)
    pos = {v: i for i, v in enumerate(nodes)}
    A_eq = [[0] * (k + 1) for _ in nodes]
    for j, (u, v) in enumerate(edges):
        A_eq[pos[u]][j] -= 1
        A_eq[pos[v]][j] += 1
    b_eq = [0] * len(nodes)
    A_eq.append([1] * k + [0])
    b_eq.append(1)
    A_ub, b_ub = [], []
    ws = [weight(u) for u, _ in edges]
    for i, xi in enumerate(x):
        A_ub.append([-w[i] for w in ws] + [1])
        b_ub.append(-xi)
    c = [0] * k + [1]
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, [True] * k + [False])
    if res.status != OPTIMAL:
        raise RuntimeError(f"circulation LP ended {res.status}")
    z = {e: res.point[j] for j, e in enumerate(edges) if res.point[j]}
    return res.value, z


# --- per-coalition context --------------------------------------------------

class CoalitionView:
    """Caches shared by the queries about one coalition in one game."""

    def __init__(self, g: Game, c: Coalition, budget: Budget = DEFAULT_BUDGET):
        self.game = g
        self.coalition = c
        self.budget = budget
        self.resp: Responses = p2_responses(g, c)
        dims = c.members
        self.wc = [tuple(w[i] for i in dims) for w in g.weights]
        self._points: dict = {}
        self._hrep: dict = {}

    def weight(self, s: int) -> tuple[int, ...]:
        return self.wc[s]

    def points(self, edges: frozenset) -> list[tuple[Fraction, ...]]:
        """Maximal simple-cycle averages of the component with these edges."""
        pts = self._points.get(edges)
        if pts is None:
            graph: dict = {}
            for u, v in edges:
                graph.setdefault(u, []).append(v)
            nodes = set(graph)
            cycles = simple_cycles(nodes, graph, self.budget.max_cycles)
            pts = maximal_points([cycle_average(cy, self.weight) for cy in cycles])
            self._points[edges] = pts
        return pts

    def hrep(self, edges: frozenset) -> Polyhedron:
        h = self._hrep.get(edges)
        if h is None:
            h = hrep_down_conv(self.points(edges), self.budget.max_facet_dim)
            self._hrep[edges] = h
        return h

    def strategy_graphs(self, s: int):
        """Arena graphs induced by the reduced player-2 strategies."""
        relevant = set(reachable(dict(enumerate(self.resp.union)), s))
        n = count_p2_reduced(self.resp, relevant)
        if n > self.budget.max_p2_strategies:
            raise ResourceError(f"{n} player-2 strategies exceed the budget {self.budget.max_p2_strategies}")
        for choice in enumerate_p2_reduced(self.resp, relevant):
            yield dict(enumerate(choice))

    def components(self, graph, s: int) -> list[frozenset]:
        return [scc_edges(k, graph) for k in reachable_sccs(graph, s)]


# --- value sets ---------------------------------------------------------------

@dataclass(frozen=True)
class ValueSet:
    coalition: Coalition
    start: int
    union: PolyUnion
    # V-form: per distinct player-2 response, the point lists of its components
    responses: tuple[tuple[tuple[tuple[Fraction, ...], ...], ...], ...] = field(default=(), repr=False)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.union.contains(vec(x))


def _union_subset(a: list[Polyhedron], b: list[Polyhedron]) -> bool:
    return all(any(contained_in(p, q) for q in b) for p in a)


def value_set(g: Game, c: Coalition, s: int, budget: Budget = DEFAULT_BUDGET,
              view: CoalitionView | None = None) -> ValueSet:
    view = view or CoalitionView(g, c, budget)
    unions: dict[frozenset, list] = {}
    for graph in view.strategy_graphs(s):
        comps = frozenset(view.components(graph, s))
        unions.setdefault(comps, [view.hrep(e) for e in sorted(comps, key=sorted)])
    # a union containing another one does not constrain the intersection
    ordered = sorted(unions.items(), key=lambda kv: (len(kv[1]), sorted(map(sorted, kv[0]))))
    kept: list[list[Polyhedron]] = []
    kept_keys = []
    for comps, parts in ordered:
        if any(_union_subset(k, parts) for k in kept):
            continue
        kept.append(parts)
        kept_keys.append(comps)
    dim = len(c)
    result = distribute([PolyUnion(dim, tuple(p)) for p in kept]).normalized()
    vform = tuple(tuple(tuple(view.points(e)) for e in sorted(k, key=sorted)) for k in kept_keys)
    return ValueSet(c, s, result, vform)


def can_enforce(g: Game, c: Coalition, s: int, x: Sequence[Fraction],
                budget: Budget = DEFAULT_BUDGET, view: CoalitionView | None = None) -> bool:
    """Can the coalition guarantee at least ``x`` from ``s``? Checked per
    player-2 strategy by hull membership of cycle averages."""
    from .geometry import down_conv_margin

    view = view or CoalitionView(g, c, budget)
    x = vec(x)
    if len(x) != len(c):
        raise ValueError("dimension mismatch")
    for graph in view.strategy_graphs(s):
        if not any(down_conv_margin(view.points(e), x) >= 0 for e in view.components(graph, s)):
            return False
    return True


def max_margin(union: PolyUnion, x: Sequence[Fraction]):
    """Largest t (or 'unbounded') with ``x + t·1`` in some part; best point."""
    best = None
    point = None
    d = union.dim
    for part in union.parts:
        # variables z (d) and t; z in part, z_i >= x_i + t
        ineqs = [HalfSpace(h.normal + (Fraction(0),), h.bound) for h in part.ineqs]
        for i in range(d):
            a = [Fraction(0)] * (d + 1)
            a[i] = Fraction(-1)
            a[d] = Fraction(1)
            ineqs.append(HalfSpace(tuple(a), -x[i]))
        eqs = tuple((a + (Fraction(0),), b) for a, b in part.eqs)
        poly = Polyhedron(d + 1, tuple(ineqs), eqs)
        obj = [0] * d + [1]
        r = lp_solve(obj, poly)
        if r.status == UNBOUNDED:
            return "unbounded", None
        if r.status == OPTIMAL and (best is None or r.value > best):
            best, point = r.value, r.point[:d]
    return best, point


# --- improvement search -------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    """A component every remaining player-2 completion must leave reachable."""

    edges: frozenset
    margin: Fraction


@dataclass
class Improvement:
    margin: Fraction | None  # None: player 2 can hold the coalition at or below x
    leaves: list[Leaf]
    nodes: int = 0
    lps: int = 0

    @property
    def found(self) -> bool:
        return self.margin is not None


def improvement_search(view: CoalitionView, s: int, x: Sequence[Fraction], strict: bool = True) -> Improvement:
    """Decide whether every player-2 strategy leaves a reachable component
    whose best unit circulation beats ``x`` (by a positive margin if
    ``strict``, otherwise by a non-negative one).

    Branch and bound over player 2's reduced choices: unassigned states keep
    all successors (optimistic graph for the coalition); the edges present
    in every completion form the guaranteed graph. A component of the
    guaranteed graph that wins closes a branch; an optimistic graph without
    a winning component refutes it.
    """
    resp = view.resp
    x = vec(x)
    budget = view.budget
    margin_cache: dict = {}
    stats = Improvement(None, [])

    def wins(t):
        return t is not None and (t > 0 if strict else t >= 0)

    def best_component(graph):
        best = (None, None, None)
        for edges in view.components(graph, s):
            hit = margin_cache.get(edges)
            if hit is None:
                stats.lps += 1
                hit = circulation_margin(list(edges), view.weight, x)
                margin_cache[edges] = hit
            t, z = hit
            if best[0] is None or t > best[0]:
                best = (t, z, edges)
        return best

    def guaranteed_graph(assign):
        return {u: assign.get(u, resp.common[u]) for u in range(len(resp.options))}

    def optimistic_graph(assign):
        return {u: assign.get(u, resp.union[u]) for u in range(len(resp.options))}

    def search(assign) -> tuple[Fraction | None, list[Leaf]]:
        stats.nodes += 1
        if stats.nodes > budget.max_search_nodes:
            raise ResourceError("improvement search exceeded its node budget")
        gg = guaranteed_graph(assign)
        t, _, edges = best_component(gg)
        if wins(t):
            return t, [Leaf(edges, t)]
        go = optimistic_graph(assign)
        t, z, edges = best_component(go)
        if not wins(t):
            return None, []
        # locate a player-2 choice the winning circulation relies on
        support = set(z)
        targets = {u for e in support for u in e}
        path = _cheapest_path(go, gg, s, targets)
        # the support may split into guaranteed pieces joined only through
        # the rest of the optimistic component, so fall back to its edges
        by_key = lambda e: (_key(e[0]), _key(e[1]))  # noqa: E731
        for u, v in path + sorted(support, key=by_key) + sorted(edges, key=by_key):
            if v not in gg[u]:
                branch, used = u, v
                break
        else:  # pragma: no cover - the guaranteed graph would have won
            raise AssertionError("winning component uses only guaranteed edges")
        options = sorted(resp.options[branch], key=lambda h: (used in h, len(h), sorted(h)))
        worst = None
        leaves: list[Leaf] = []
        for h in options:
            assign[branch] = h
            t, lv = search(assign)
            del assign[branch]
            if t is None:
                return None, []
            leaves.extend(lv)
            worst = t if worst is None else min(worst, t)
        return worst, leaves

    margin, leaves = search({})
    stats.margin = margin
    stats.leaves = leaves
    return stats


def _cheapest_path(go, gg, s, targets) -> list[tuple]:
    """Path from s into ``targets`` in ``go`` using fewest non-guaranteed edges."""
    if s in targets:
        return []
    dist = {s: 0}
    prev = {}
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for v in go[u]:
            cost = dist[u] + (0 if v in gg[u] else 1)
            if v not in dist or cost < dist[v]:
                dist[v] = cost
                prev[v] = u
                if cost == dist[u]:
                    dq.appendleft(v)
                else:
                    dq.append(v)
    end = min((t for t in targets if t in dist), key=lambda t: (dist[t], _key(t)))
    path = []
    v = end
    while v != s:
        path.append((prev[v], v))
        v = prev[v]
    return path[::-1]


def strictly_improvable(g: Game, c: Coalition, s: int, x: Sequence[Fraction],
                        budget: Budget = DEFAULT_BUDGET, method: str = "search",
                        view: CoalitionView | None = None):
    """A point z of the coalition's value set with z > x componentwise, or None.

    ``method="parts"`` maximises the margin over each part of the value set;
    ``method="search"`` uses the branch-and-bound search and avoids building
    the value set. Both return ``x + t·1`` for a positive achievable t.
    """
    x = vec(x)
    if len(x) != len(c):
        raise ValueError("dimension mismatch")
    if method == "parts":
        vs = value_set(g, c, s, budget, view)
        t, point = max_margin(vs.union, x)
        if t == "unbounded":  # pragma: no cover - value sets are bounded above
            return tuple(v + 1 for v in x)
        if t is None or t <= 0:
            return None
        return tuple(v + t for v in x)
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    view = view or CoalitionView(g, c, budget)
    res = improvement_search(view, s, x, strict=True)
    if not res.found:
        return None
    return tuple(v + res.margin for v in x)
