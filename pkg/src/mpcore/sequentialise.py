"""Two-player turn-based view of a game for a coalition.

Player 1 (the coalition) picks a joint action at each arena state, then
player 2 (everyone else) picks one of the successors that some completion
of that joint action reaches.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .game import Coalition, Game

V2 = tuple[int, tuple[int, ...]]  # (arena state, coalition action profile)


@dataclass(frozen=True, eq=False)
class MMPG:
    game: Game
    coalition: Coalition
    v1: tuple[int, ...]
    v2: tuple[V2, ...]
    succ2: dict  # V2 -> tuple of successor arena states (sorted, deduplicated)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.coalition.members

    def weight(self, node) -> tuple[int, ...]:
        s = node[0] if isinstance(node, tuple) else node
        w = self.game.weights[s]
        return tuple(w[i] for i in self.dims)

    @cached_property
    def succ1(self) -> dict[int, tuple[V2, ...]]:
        out: dict[int, list] = {s: [] for s in self.v1}
        for v in self.v2:
            out[v[0]].append(v)
        return {s: tuple(vs) for s, vs in out.items()}

    def edges(self) -> Iterator[tuple]:
        for s in self.v1:
            for v in self.succ1[s]:
                yield s, v
        for v in self.v2:
            for t in self.succ2[v]:
                yield v, t


@dataclass(frozen=True)
class MemorylessP2:
    choice: tuple[int, ...]  # successor for each v2 state, aligned with MMPG.v2

    def as_dict(self, m: MMPG) -> dict:
        return dict(zip(m.v2, self.choice))


def image_sets(g: Game, c: Coalition) -> list[dict[tuple[int, ...], frozenset[int]]]:
    """For each arena state: the actions of the coalition members that can
    move the play -> set of successors the other players can still pick."""
    inside = set(c.members)
    out = []
    for movers, table in g.influence:
        mine = [k for k, i in enumerate(movers) if i in inside]
        img: dict[tuple[int, ...], set[int]] = {}
        for ap, t in table.items():
            img.setdefault(tuple(ap[k] for k in mine), set()).add(t)
        out.append({k: frozenset(v) for k, v in sorted(img.items())})
    return out


def coalition_images(g: Game, c: Coalition) -> list[dict[tuple[int, ...], frozenset[int]]]:
    """For each arena state: coalition profile -> set of reachable successors."""
    out = []
    for (movers, _), img in zip(g.influence, image_sets(g, c)):
        pick = [k for k, i in enumerate(c.members) if i in set(movers)]
        full = {}
        for ac in itertools.product(*(range(len(g.actions[i])) for i in c.members)):
            full[ac] = img[tuple(ac[k] for k in pick)]
        out.append(full)
    return out


def sequentialise(g: Game, c: Coalition) -> MMPG:
    if not c.members:
        raise ValueError("empty coalition")
    images = coalition_images(g, c)
    v2 = []
    succ2 = {}
    for s in range(len(g.states)):
        for ac, ts in images[s].items():
            v = (s, ac)
            v2.append(v)
            succ2[v] = tuple(sorted(ts))
    return MMPG(g, c, tuple(range(len(g.states))), tuple(v2), succ2)


def enumerate_p2(m: MMPG) -> Iterator[MemorylessP2]:
    """Every memoryless player-2 strategy, in lexicographic order."""
    for choice in itertools.product(*(m.succ2[v] for v in m.v2)):
        yield MemorylessP2(tuple(choice))


def count_p2(m: MMPG) -> int:
    n = 1
    for v in m.v2:
        n *= len(m.succ2[v])
    return n


def induced_subgame(m: MMPG, s2: MemorylessP2) -> dict:
    """Adjacency of the MMPG with player 2's choices fixed."""
    graph: dict = {s: m.succ1[s] for s in m.v1}
    for v, t in zip(m.v2, s2.choice):
        graph[v] = (t,)
    return graph


# --- reduced responses ------------------------------------------------------

def minimal_hitting_sets(family: list[frozenset[int]]) -> tuple[frozenset[int], ...]:
    """Inclusion-minimal sets meeting every member of ``family``."""
    universe = sorted(frozenset().union(*family))
    fam = sorted(set(family), key=lambda f: (len(f), sorted(f)))
    found: list[frozenset[int]] = []
    for k in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            h = frozenset(combo)
            if any(f <= h for f in found):
                continue
            if all(h & f for f in fam):
                found.append(h)
    return tuple(sorted(found, key=lambda h: (len(h), sorted(h))))


@dataclass(frozen=True, eq=False)
class Responses:
    """Player 2's memoryless choices projected onto arena states.

    A memoryless strategy fixes one successor per coalition profile, so at
    state s the coalition can reach exactly a set H meeting every image set
    T(s, ac). Only inclusion-minimal H matter: extra edges never hurt the
    coalition, so the value intersection over minimal H equals the one over
    all strategies.
    """

    game: Game
    coalition: Coalition
    options: tuple[tuple[frozenset[int], ...], ...]  # per state

    @cached_property
    def union(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset().union(*opts) for opts in self.options)

    @cached_property
    def common(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset.intersection(*opts) for opts in self.options)

    def decision_states(self) -> list[int]:
        return [s for s, opts in enumerate(self.options) if len(opts) > 1]


def p2_responses(g: Game, c: Coalition) -> Responses:
    images = image_sets(g, c)
    opts = tuple(minimal_hitting_sets(list(img.values())) for img in images)
    return Responses(g, c, opts)


def enumerate_p2_reduced(r: Responses, relevant: set[int] | None = None) -> Iterator[tuple[frozenset[int], ...]]:
    """Successor-set choices per state; states outside ``relevant`` keep their first option."""
    n = len(r.options)
    axes = []
    for s in range(n):
        if relevant is None or s in relevant:
            axes.append(r.options[s])
        else:
            axes.append(r.options[s][:1])
    yield from itertools.product(*axes)


def count_p2_reduced(r: Responses, relevant: set[int] | None = None) -> int:
    k = 1
    for s, opts in enumerate(r.options):
        if relevant is None or s in relevant:
            k *= len(opts)
    return k
