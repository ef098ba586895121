"""Domination, beneficial deviations, core membership, core non-emptiness
and GR(1)-constrained core queries.

Non-emptiness and the E-Core query search the payoff space lazily. A
candidate payoff x is read off a unit circulation in a reachable component
of the arena. If some coalition can strictly beat x, its winning search
tree names components that every adversary response must leave reachable.
Every undominated point has to lie outside the interior of at least one of
their downward hulls, and that disjunction of half-spaces is added as a cut.
Cuts never remove undominated points and each one removes the current
candidate. There are finitely many of them, so the search terminates.
"""
from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

from .config import DEFAULT_BUDGET, Budget
from .game import Coalition, Game, Lasso, StrategyProfile, all_coalitions
from .geometry import (Polyhedron, PolyUnion, ResourceError, complement_halfspace,
                       distribute, lift_halfspace, lp_solve, vec)
from .gr1 import Bundle, Gr1Spec, check_atoms, negate_gr1, sat_states
from .lp import LPStats, OPTIMAL, solve_lp
from .payoff import compute_payoff, lasso_payoff
from .values import (CoalitionView, circulation_margin, improvement_search, reachable,
                     reachable_sccs, scc_edges, can_enforce, value_set)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: object = None
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Domination:
    coalition: Coalition
    z: tuple[Fraction, ...]
    # edge sets of components some player-2 completion must leave reachable
    leaves: tuple[frozenset, ...] = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class NotDominatedRegion:
    state: int
    region: PolyUnion


@dataclass(frozen=True)
class CoreWitness:
    """A payoff vector of an E-Core candidate, with the unit circulation that
    produces it and a lasso through the circulation's support."""

    x: tuple[Fraction, ...]
    circulation: dict
    lasso: Lasso
    exact: bool  # lasso payoff equals x (support was connected)
    variant: str
    states: frozenset[int]  # states the run may visit


# --- domination ----------------------------------------------------------------

def _search_job(args):
    g, members, s, x, budget = args
    c = Coalition(members)
    view = CoalitionView(g, c, budget)
    res = improvement_search(view, s, [x[i] for i in members], strict=True)
    return res.margin, tuple(l.edges for l in res.leaves), res.nodes


class Dominance:
    """Answers domination queries on one game, caching per-coalition data."""

    def __init__(self, g: Game, budget: Budget = DEFAULT_BUDGET, jobs: int = 1):
        self.game = g
        self.budget = budget
        self.jobs = jobs
        self._views: dict[tuple, CoalitionView] = {}
        self._arena: dict[int, list[frozenset]] = {}
        self.coalitions_checked = 0
        self.search_nodes = 0
        self.queries = 0

    def view(self, c: Coalition) -> CoalitionView:
        v = self._views.get(c.members)
        if v is None:
            v = self._views[c.members] = CoalitionView(self.game, c, self.budget)
        return v

    def arena_components(self, s: int) -> list[frozenset]:
        comps = self._arena.get(s)
        if comps is None:
            graph = dict(enumerate(self.game.successors))
            comps = [scc_edges(k, graph) for k in reachable_sccs(graph, s)]
            self._arena[s] = comps
        return comps

    def candidates(self, s: int, x: Sequence[Fraction]) -> list[Coalition]:
        """Coalitions that could beat x if everybody cooperated, size then lex.

        That superset test is monotone (a sub-coalition of a passing
        coalition passes), so candidates are grown level by level."""
        g = self.game
        comps = self.arena_components(s)
        states = {u for e in comps for (u, _) in e}
        best = [max(g.weights[u][i] for u in states) for i in range(g.n)]
        alive = [i for i in range(g.n) if x[i] < best[i]]

        def passes(members):
            for edges in comps:
                t, _ = circulation_margin(list(edges), lambda u: tuple(g.weights[u][i] for i in members),
                                          [x[i] for i in members])
                if t > 0:
                    return True
            return False

        level = [(i,) for i in alive if passes((i,))]
        out = list(level)
        k = 1
        while level and k < g.n:
            k += 1
            prev = set(level)
            singles = sorted({i for c in level for i in c})
            nxt = []
            for combo in itertools.combinations(singles, k):
                if all(sub in prev for sub in itertools.combinations(combo, k - 1)) and passes(combo):
                    nxt.append(combo)
            out.extend(nxt)
            level = nxt
        return [Coalition(c) for c in out]

    def check(self, s: int, x: Sequence[Fraction], coalitions: Sequence[Coalition] | None = None):
        x = vec(x)
        if len(x) != self.game.n:
            raise ValueError(f"payoff vector needs {self.game.n} entries")
        self.queries += 1
        cands = self.candidates(s, x) if coalitions is None else list(coalitions)
        if self.jobs > 1 and len(cands) > 1:
            return self._check_parallel(s, x, cands)
        for c in cands:
            self.coalitions_checked += 1
            res = improvement_search(self.view(c), s, [x[i] for i in c.members], strict=True)
            self.search_nodes += res.nodes
            if res.found:
                z = tuple(x[i] + res.margin for i in c.members)
                return Domination(c, z, tuple(l.edges for l in res.leaves))
        return None

    def _check_parallel(self, s, x, cands):
        with ProcessPoolExecutor(self.jobs) as pool:
            for start in range(0, len(cands), self.jobs):
                chunk = cands[start:start + self.jobs]
                args = [(self.game, c.members, s, x, self.budget) for c in chunk]
                for c, (margin, leaves, nodes) in zip(chunk, pool.map(_search_job, args)):
                    self.coalitions_checked += 1
                    self.search_nodes += nodes
                    if margin is not None:
                        return Domination(c, tuple(x[i] + margin for i in c.members), leaves)
        return None

    def stats(self) -> dict:
        return {"coalitions_checked": self.coalitions_checked, "search_nodes": self.search_nodes}


class _LPCounter:
    def __enter__(self):
        self.start = LPStats.solved
        return self

    def __exit__(self, *exc):
        pass

    @property
    def count(self) -> int:
        return LPStats.solved - self.start


def _state(g: Game, s) -> int:
    if isinstance(s, str):
        if s not in g.state_index:
            raise ValueError(f"unknown state {s!r}")
        return g.state_index[s]
    return s


def dominated(g: Game, s, x: Sequence, budget: Budget = DEFAULT_BUDGET, jobs: int = 1,
              oracle: Dominance | None = None) -> Verdict:
    """Is there a coalition that can guarantee every member strictly more than x?"""
    oracle = oracle or Dominance(g, budget, jobs)
    with _LPCounter() as lp:
        w = oracle.check(_state(g, s), x)
    stats = {**oracle.stats(), "lps": lp.count}
    return Verdict(w is not None, w, stats)


def exists_beneficial_deviation(g: Game, p: StrategyProfile, budget: Budget = DEFAULT_BUDGET,
                                jobs: int = 1) -> Verdict:
    v = dominated(g, g.init_index, compute_payoff(g, p), budget, jobs)
    return Verdict(v.answer, v.witness, {**v.stats, "payoff": compute_payoff(g, p)})


def membership(g: Game, p: StrategyProfile, budget: Budget = DEFAULT_BUDGET, jobs: int = 1) -> Verdict:
    v = exists_beneficial_deviation(g, p, budget, jobs)
    return Verdict(not v.answer, v.witness, v.stats)


# --- explicit not-dominated region ------------------------------------------------

def not_dominated_region(g: Game, s, budget: Budget = DEFAULT_BUDGET, max_parts: int = 20_000) -> NotDominatedRegion:
    """Points no coalition can strictly improve on from s, as a union of
    polyhedra: for each coalition and each part of its value set, at least
    one facet must be met or exceeded."""
    s = _state(g, s)
    n = g.n
    unions = []
    for c in all_coalitions(n):
        vs = value_set(g, c, s, budget)
        for part in vs.union.parts:
            hs = [lift_halfspace(complement_halfspace(h), c.members, n) for h in part.ineqs]
            unions.append(PolyUnion(n, tuple(Polyhedron(n, (h,)) for h in sorted(set(hs)))))
    # small unions first keeps the intermediate products small
    unions.sort(key=lambda u: len(u.parts))
    region = distribute(unions) if unions else PolyUnion(n, (Polyhedron(n),))
    if len(region.parts) > max_parts:  # pragma: no cover - guard for large instances
        raise ResourceError("not-dominated region has too many parts")
    return NotDominatedRegion(s, region.normalized())


# --- lazy search over circulations ------------------------------------------------

@dataclass(frozen=True)
class _Requirement:
    name: str
    visits: tuple[frozenset[int], ...]
    avoid: frozenset[int]


class _CoreSearch:
    """Finds a circulation payoff that is undominated at a set of states."""

    def __init__(self, g: Game, oracle: Dominance, budget: Budget):
        self.game = g
        self.oracle = oracle
        self.budget = budget
        # per state: list of blocks; a block is a list of (members, a, b) meaning a·x_C >= b
        self.blocks: dict[int, list[list[tuple]]] = {}
        self.cuts = 0
        self.candidates = 0

    def _block_from(self, s: int, w: Domination) -> list[tuple]:
        view = self.oracle.view(w.coalition)
        out = set()
        for edges in w.leaves:
            for h in view.hrep(edges).ineqs:
                out.add((w.coalition.members, h.normal, h.bound))
        return sorted(out)

    def _lp(self, edges, chosen, visits, n):
        g = self.game
        k = len(edges)
        nodes = sorted({u for e in edges for u in e})
        nv = k + n + 1  # z, x, t
        A_eq, b_eq, A_ub, b_ub = [], [], [], []
        for v in nodes:
            row = [0] * nv
            for j, (a, b) in enumerate(edges):
                if a == v:
                    row[j] -= 1
                if b == v:
                    row[j] += 1
            A_eq.append(row)
            b_eq.append(0)
        A_eq.append([1] * k + [0] * (n + 1))
        b_eq.append(1)
        for i in range(n):
            row = [-g.weights[a][i] for a, _ in edges] + [0] * (n + 1)
            row[k + i] = 1
            A_eq.append(row)
            b_eq.append(0)
        for vs in visits:
            row = [-1 if a in vs else 0 for a, _ in edges] + [0] * n + [1]
            A_ub.append(row)
            b_ub.append(0)
        for members, a, b in chosen:
            row = [0] * nv
            for i, v in zip(members, a):
                row[k + i] = -v
            A_ub.append(row)
            b_ub.append(-b)
        if visits:
            c = [0] * (k + n) + [1]
        else:
            c = [0] * k + [1] * n + [0]
            A_ub.append([0] * (nv - 1) + [1])  # pin t when unused
            b_ub.append(0)
        res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, [True] * k + [False] * (n + 1))
        if res.status != OPTIMAL:
            return None
        if visits and res.point[-1] <= 0:
            return None
        z = {e: res.point[j] for j, e in enumerate(edges) if res.point[j]}
        return tuple(res.point[k:k + n]), z

    def search(self, edges, visits, check_states) -> tuple | None:
        """An undominated (at every state of ``check_states``) circulation payoff."""
        n = self.game.n
        edges = sorted(edges)

        def unsatisfied(x):
            for s in check_states:
                for bi, blk in enumerate(self.blocks.setdefault(s, [])):
                    if not any(sum(v * x[i] for i, v in zip(m, a)) >= b for m, a, b in blk):
                        return blk
            return None

        def explore(chosen):
            sol = self._lp(edges, chosen, visits, n)
            if sol is None:
                return None
            x, z = sol
            while True:
                blk = unsatisfied(x)
                if blk is None:
                    self.candidates += 1
                    for s in check_states:
                        w = self.oracle.check(s, x)
                        if w is not None:
                            break
                    else:
                        return x, z
                    if self.cuts >= self.budget.max_cuts:
                        raise ResourceError("refinement budget exhausted")
                    self.cuts += 1
                    blk = self._block_from(s, w)
                    self.blocks[s].append(blk)
                for d in blk:
                    r = explore(chosen + [d])
                    if r is not None:
                        return r
                return None

        return explore([])


def _components(g: Game, allowed: frozenset[int], avoid: frozenset[int]) -> list[frozenset]:
    """Edge sets of components inside ``allowed - avoid`` reachable from the
    initial state through ``allowed``."""
    inside = allowed - avoid
    full = {u: [v for v in g.successors[u] if v in allowed] for u in allowed}
    reach = set(reachable(full, g.init_index))
    graph = {u: [v for v in g.successors[u] if v in inside] for u in inside}
    comps = []
    seen = set()
    for u in sorted(reach & inside):
        if u in seen:
            continue
        for k in reachable_sccs(graph, u):
            e = scc_edges(k, graph)
            if e not in seen:
                seen.add(e)
                comps.append(e)
        seen.add(u)
    return sorted(set(comps), key=lambda e: sorted(e))


def _requirements(g: Game, spec: Gr1Spec | None) -> list[_Requirement]:
    if spec is None:
        return [_Requirement("unconstrained", (), frozenset())]
    check_atoms(g, spec)
    out = [_Requirement("guarantees", tuple(sat_states(g, t) for t in spec.guarantees), frozenset())]
    for l, psi in enumerate(spec.premises):
        out.append(_Requirement(f"premise-escape:{l + 1}", (), sat_states(g, psi)))
    return out


def _bundle_requirements(g: Game, bundles: list[Bundle]) -> list[_Requirement]:
    out = []
    for r, b in enumerate(bundles):
        visits = tuple(sat_states(g, p) for p in b.visit)
        avoid = frozenset().union(*(sat_states(g, t) for t in b.avoid))
        out.append(_Requirement(f"guarantee-fails:{r + 1}", visits, avoid))
    return out


def _subsets(g: Game, budget: Budget):
    """State sets S containing the initial state, all of whose states are
    reachable from it inside S; largest first."""
    base = reachable(dict(enumerate(g.successors)), g.init_index)
    others = [u for u in base if u != g.init_index]
    count = 0
    for size in range(len(others), -1, -1):
        for combo in itertools.combinations(others, size):
            s = frozenset(combo) | {g.init_index}
            inner = {u: [v for v in g.successors[u] if v in s] for u in s}
            if len(reachable(inner, g.init_index)) != len(s):
                continue
            count += 1
            if count > budget.max_subsets:
                raise ResourceError("too many state subsets for the path-wise E-Core check")
            yield s


def _core_query(g: Game, reqs: list[_Requirement], budget: Budget, jobs: int, along_path: bool) -> Verdict:
    oracle = Dominance(g, budget, jobs)
    search = _CoreSearch(g, oracle, budget)
    all_states = frozenset(range(len(g.states)))
    with _LPCounter() as lp:
        found = None
        scopes = _subsets(g, budget) if along_path else [all_states]
        for allowed in scopes:
            check = sorted(allowed) if along_path else [g.init_index]
            for req in reqs:
                if any(not v for v in req.visits):
                    continue
                for edges in _components(g, allowed, req.avoid):
                    r = search.search(edges, req.visits, check)
                    if r is not None:
                        found = (r, req, allowed)
                        break
                if found:
                    break
            if found:
                break
    stats = {**oracle.stats(), "lps": lp.count, "cuts": search.cuts, "candidates": search.candidates}
    if not found:
        return Verdict(False, None, stats)
    (x, z), req, allowed = found
    lasso, exact = circulation_lasso(g, z, allowed)
    return Verdict(True, CoreWitness(x, z, lasso, exact, req.name, allowed), stats)


def core_nonempty(g: Game, budget: Budget = DEFAULT_BUDGET, method: str = "search", jobs: int = 1) -> Verdict:
    """Does some finite-memory profile admit no beneficial deviation?

    ``method="region"`` intersects the grand coalition's value set with the
    explicit not-dominated region (small games only); ``method="search"``
    runs the lazy circulation search.
    """
    if method == "region":
        with _LPCounter() as lp:
            nd = not_dominated_region(g, g.init_index, budget)
            vn = value_set(g, Coalition.grand(g), g.init_index, budget)
            for p in vn.union.parts:
                for q in nd.region.parts:
                    r = lp_solve([1] * g.n, p.intersect(q))
                    if r.status == OPTIMAL:
                        return Verdict(True, r.point, {"lps": lp.count, "parts": len(nd.region.parts)})
        return Verdict(False, None, {"lps": lp.count, "parts": len(nd.region.parts)})
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    v = _core_query(g, _requirements(g, None), budget, jobs, along_path=False)
    return Verdict(v.answer, v.witness.x if v.answer else None, {**v.stats, "witness": v.witness})


def e_core_gr1(g: Game, spec: Gr1Spec, budget: Budget = DEFAULT_BUDGET, jobs: int = 1,
               along_path: bool = False) -> Verdict:
    """Is some core profile's run a model of ``spec``?

    By default undominatedness is required at the initial state, which is
    what core membership means. ``along_path=True`` also requires it at
    every state the run may visit (a stronger, sufficient condition)."""
    return _core_query(g, _requirements(g, spec), budget, jobs, along_path)


def a_core_gr1(g: Game, spec: Gr1Spec, budget: Budget = DEFAULT_BUDGET, jobs: int = 1,
               along_path: bool = False) -> Verdict:
    """Do all core profiles satisfy ``spec``? No-witness: a core run violating it."""
    check_atoms(g, spec)
    bundles = negate_gr1(spec)
    if not bundles:
        return Verdict(True, None, {"bundles": 0})
    v = _core_query(g, _bundle_requirements(g, bundles), budget, jobs, along_path)
    return Verdict(not v.answer, v.witness, {**v.stats, "bundles": len(bundles)})


# --- witnesses --------------------------------------------------------------------

def _edge_code(g: Game, u: int, v: int) -> int:
    return g.table[u].index(v)


def _path(g: Game, src: int, dst_set, allowed) -> list[int]:
    """Shortest state path from src to a member of dst_set inside ``allowed`` (src included)."""
    prev = {src: None}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        if u in dst_set:
            out = []
            while u is not None:
                out.append(u)
                u = prev[u]
            return out[::-1]
        for v in sorted(g.successors[u]):
            if v in allowed and v not in prev:
                prev[v] = u
                dq.append(v)
    raise ValueError("target unreachable")


def _euler(mult: dict) -> list[int]:
    """Eulerian circuit of a connected balanced multigraph (Hierholzer)."""
    adj: dict[int, list[int]] = {}
    for (u, v), m in sorted(mult.items()):
        adj.setdefault(u, []).extend([v] * m)
    for u in adj:
        adj[u].reverse()
    start = min(adj)
    stack = [start]
    circuit = []
    while stack:
        u = stack[-1]
        if adj.get(u):
            stack.append(adj[u].pop())
        else:
            circuit.append(stack.pop())
    circuit.reverse()
    return circuit[:-1]


def circulation_lasso(g: Game, z: dict, allowed=None) -> tuple[Lasso, bool]:
    """Lasso walking the circulation's support with integer multiplicities.

    With a connected support the cycle's mean payoff is exactly the
    circulation's; otherwise the pieces are joined by connecting paths and
    the flag ``exact`` is False."""
    allowed = frozenset(range(len(g.states))) if allowed is None else allowed
    den = reduce(lcm, (q.denominator for q in z.values()), 1)
    mult = {e: int(q * den) for e, q in z.items()}
    # split the support into weakly connected pieces
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            a = parent[a]
        return a

    for u, v in mult:
        parent[find(u)] = find(v)
    pieces: dict[int, dict] = {}
    for e, m in mult.items():
        pieces.setdefault(find(e[0]), {})[e] = m
    circuits = [_euler(p) for _, p in sorted(pieces.items(), key=lambda kv: min(u for e in kv[1] for u in e))]
    exact = len(circuits) == 1
    cycle = list(circuits[0])
    for nxt in circuits[1:]:
        link = _path(g, cycle[-1], {nxt[0]}, allowed)
        cycle += link[1:-1] + nxt
    if not exact:
        link = _path(g, cycle[-1], {cycle[0]}, allowed)
        cycle += link[1:-1]
    # enter the cycle at the state closest to the initial state
    on_cycle = set(cycle)
    stem = _path(g, g.init_index, on_cycle, allowed)
    entry = stem[-1]
    i = cycle.index(entry)
    cycle = cycle[i:] + cycle[:i]
    stem = stem[:-1]
    seq = stem + cycle
    codes = [_edge_code(g, a, b) for a, b in zip(seq, seq[1:])] + [_edge_code(g, cycle[-1], cycle[0])]
    return Lasso(tuple(stem), tuple(cycle), tuple(codes)), exact


def check_circulation(g: Game, w: CoreWitness, visits=(), avoid=frozenset()) -> bool:
    """Algebraic re-check of an E-Core circulation witness."""
    z = w.circulation
    if any(q <= 0 for q in z.values()) or sum(z.values()) != 1:
        return False
    bal: dict[int, Fraction] = {}
    for (u, v), q in z.items():
        if v not in g.successors[u] or u not in w.states or v not in w.states:
            return False
        bal[u] = bal.get(u, 0) - q
        bal[v] = bal.get(v, 0) + q
    if any(b != 0 for b in bal.values()):
        return False
    x = tuple(sum((q * g.weights[u][i] for (u, _), q in z.items()), Fraction(0)) for i in range(g.n))
    if x != tuple(w.x):
        return False
    if any(u in avoid for e in z for u in e):
        return False
    if any(not any(u in vs for (u, _) in z) for vs in visits):
        return False
    if not w.lasso.check(g):
        return False
    if w.exact and lasso_payoff(g, w.lasso) != tuple(w.x):
        return False
    return True


def verify_domination(g: Game, s, x: Sequence, w: Domination, budget: Budget = DEFAULT_BUDGET) -> bool:
    s = _state(g, s)
    xc = [Fraction(x[i]) for i in w.coalition.members]
    if not all(a > b for a, b in zip(w.z, xc)):
        return False
    return can_enforce(g, w.coalition, s, w.z, budget)


def verify_undominated(g: Game, x: Sequence, states=None, budget: Budget = DEFAULT_BUDGET) -> bool:
    oracle = Dominance(g, budget)
    states = [g.init_index] if states is None else states
    return all(oracle.check(s, x) is None for s in states)


def verify_nonempty_witness(g: Game, x: Sequence, budget: Budget = DEFAULT_BUDGET) -> bool:
    return (verify_undominated(g, x, None, budget)
            and can_enforce(g, Coalition.grand(g), g.init_index, x, budget))
