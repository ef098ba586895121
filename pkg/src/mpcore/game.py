"""Concurrent multi-player arenas with integer state weights, finite-memory
strategy machines and the lasso runs they induce.

Names are kept for I/O; everything else is indexed. Profiles are encoded as
mixed-radix integers over the players' action lists (player 0 most
significant), matching the comma-joined key order of the file format.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class GameFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Game:
    players: tuple[str, ...]
    actions: tuple[tuple[str, ...], ...]
    states: tuple[str, ...]
    init: str
    labels: tuple[frozenset[str], ...]  # per state index
    weights: tuple[tuple[int, ...], ...]  # per state index, one entry per player
    table: tuple[tuple[int, ...], ...]  # table[s][profile] = successor index
    propositions: frozenset[str] = frozenset()

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def player_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.players)}

    @cached_property
    def action_index(self) -> tuple[dict[str, int], ...]:
        return tuple({a: i for i, a in enumerate(acts)} for acts in self.actions)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def init_index(self) -> int:
        return self.state_index[self.init]

    @cached_property
    def radix(self) -> tuple[int, ...]:
        # place value of each player's action in the profile code
        out = []
        m = 1
        for acts in reversed(self.actions):
            out.append(m)
            m *= len(acts)
        return tuple(reversed(out))

    @cached_property
    def n_profiles(self) -> int:
        m = 1
        for acts in self.actions:
            m *= len(acts)
        return m

    @cached_property
    def influence(self) -> tuple[tuple[tuple[int, ...], dict[tuple[int, ...], int]], ...]:
        """Per state: the players whose action can change the successor, and
        the successor as a function of just their actions."""
        out = []
        for row in self.table:
            movers = []
            for i, (r, acts) in enumerate(zip(self.radix, self.actions)):
                k = len(acts)
                if k > 1 and any(row[code] != row[code - ((code // r) % k) * r] for code in range(len(row))):
                    movers.append(i)
            movers = tuple(movers)
            table = {}
            for ap in itertools.product(*(range(len(self.actions[i])) for i in movers)):
                table[ap] = row[sum(a * self.radix[i] for a, i in zip(ap, movers))]
            out.append((movers, table))
        return tuple(out)

    def encode(self, ap: Sequence[int]) -> int:
        return sum(a * r for a, r in zip(ap, self.radix))

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple((code // r) % len(acts) for r, acts in zip(self.radix, self.actions))

    def profile_key(self, code: int) -> str:
        return ",".join(self.actions[i][a] for i, a in enumerate(self.decode(code)))

    def step(self, s: str, ap: Sequence[str]) -> str:
        """Successor of ``s`` under the action profile ``ap`` (action names)."""
        if len(ap) != self.n:
            raise ValueError("action profile must name one action per player")
        code = self.encode([self.action_index[i][a] for i, a in enumerate(ap)])
        return self.states[self.table[self.state_index[s]][code]]

    @cached_property
    def successors(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(row) for row in self.table)

    @cached_property
    def max_abs_weight(self) -> int:
        return max((abs(w) for ws in self.weights for w in ws), default=0)

    def weight(self, player: str, state: str) -> int:
        return self.weights[self.state_index[state]][self.player_index[player]]

    def with_weights(self, weights: Mapping[str, Sequence[int]]) -> "Game":
        new = list(self.weights)
        for s, w in weights.items():
            new[self.state_index[s]] = tuple(int(v) for v in w)
        return Game(self.players, self.actions, self.states, self.init, self.labels,
                    tuple(new), self.table, self.propositions)


@dataclass(frozen=True)
class Coalition:
    members: tuple[int, ...]  # sorted player indices

    def __post_init__(self):
        if not self.members:
            raise ValueError("coalitions must be non-empty")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("coalition members must be sorted and distinct")

    @classmethod
    def of(cls, g: Game, names: Iterable[str]) -> "Coalition":
        try:
            idx = sorted({g.player_index[p] for p in names})
        except KeyError as e:
            raise GameFormatError(f"unknown player {e.args[0]!r}") from None
        return cls(tuple(idx))

    @classmethod
    def grand(cls, g: Game) -> "Coalition":
        return cls(tuple(range(g.n)))

    def complement(self, n: int) -> tuple[int, ...]:
        return tuple(i for i in range(n) if i not in self.members)

    def names(self, g: Game) -> list[str]:
        return [g.players[i] for i in self.members]

    def __len__(self) -> int:
        return len(self.members)


def all_coalitions(n: int) -> list[Coalition]:
    """Non-empty coalitions by size, then lexicographically."""
    return [Coalition(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]


@dataclass(frozen=True, eq=False)
class StrategyMachine:
    internal_states: tuple[str, ...]
    init: int
    delta: tuple[tuple[int, ...], ...]  # delta[q][arena state] = q'
    act: tuple[int, ...]  # act[q] = action index

    @classmethod
    def constant(cls, action: int, n_states: int) -> "StrategyMachine":
        return cls(("q",), 0, ((0,) * n_states,), (action,))


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    machines: tuple[StrategyMachine, ...]

    @cached_property
    def memory_size(self) -> int:
        m = 1
        for mach in self.machines:
            m *= len(mach.internal_states)
        return m


@dataclass(frozen=True)
class Configuration:
    arena_state: int
    internal_states: tuple[int, ...]


@dataclass(frozen=True)
class Lasso:
    """``stem`` then ``cycle`` repeated forever (state indices); ``profiles``
    records one realising action-profile code per step of stem + cycle."""

    stem: tuple[int, ...]
    cycle: tuple[int, ...]
    profiles: tuple[int, ...] = ()

    def names(self, g: Game) -> dict:
        return {"stem": [g.states[s] for s in self.stem],
                "cycle": [g.states[s] for s in self.cycle]}

    def check(self, g: Game) -> bool:
        """Every consecutive pair (with wrap-around) is a game transition."""
        seq = list(self.stem) + list(self.cycle)
        if not self.cycle or (self.stem and self.stem[0] != g.init_index) or seq[0] != g.init_index:
            return False
        pairs = list(zip(seq, seq[1:])) + [(self.cycle[-1], self.cycle[0])]
        if self.profiles:
            if len(self.profiles) != len(pairs):
                return False
            return all(g.table[a][c] == b for (a, b), c in zip(pairs, self.profiles))
        return all(b in g.successors[a] for a, b in pairs)


def initial_configuration(g: Game, p: StrategyProfile) -> Configuration:
    return Configuration(g.init_index, tuple(m.init for m in p.machines))


def run_step(g: Game, p: StrategyProfile, c: Configuration) -> Configuration:
    s = c.arena_state
    code = 0
    for m, q, r in zip(p.machines, c.internal_states, g.radix):
        code += m.act[q] * r
    nxt = tuple(m.delta[q][s] for m, q in zip(p.machines, c.internal_states))
    return Configuration(g.table[s][code], nxt)


def profile_code(g: Game, p: StrategyProfile, c: Configuration) -> int:
    return sum(m.act[q] * r for m, q, r in zip(p.machines, c.internal_states, g.radix))


@dataclass(frozen=True, eq=False)
class SubArena:
    """Game restricted to a state set. Transitions leaving the set are dropped,
    so the result may be partial; it is used for path and cycle search only."""

    game: Game
    keep: frozenset[int]
    edges: tuple[dict[int, int], ...]  # per state: profile code -> successor (inside keep)
    partial: bool

    @cached_property
    def successors(self) -> dict[int, frozenset[int]]:
        return {s: frozenset(self.edges[s].values()) for s in sorted(self.keep)}


def restrict_arena(g: Game, keep: Iterable[str | int]) -> SubArena:
    idx = set()
    for s in keep:
        if isinstance(s, str):
            if s not in g.state_index:
                raise GameFormatError(f"unknown state {s!r}")
            s = g.state_index[s]
        idx.add(s)
    if g.init_index not in idx:
        raise ValueError("restriction must keep the initial state")
    edges = []
    partial = False
    for s in range(len(g.states)):
        row = {}
        if s in idx:
            for code, t in enumerate(g.table[s]):
                if t in idx:
                    row[code] = t
                else:
                    partial = True
        edges.append(row)
    return SubArena(g, frozenset(idx), tuple(edges), partial)


# --- file formats ----------------------------------------------------------

def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise GameFormatError(f"duplicate entry {k!r}")
        out[k] = v
    return out


def _load(text: str, what: str) -> dict:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"syntax error in {what} file: {e}") from None
    if not isinstance(data, dict):
        raise GameFormatError(f"{what} file must hold an object")
    return data


def _names(value, what: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not value or not all(isinstance(v, str) for v in value):
        raise GameFormatError(f"{what} must be a non-empty array of strings")
    if len(set(value)) != len(value):
        raise GameFormatError(f"duplicate entry in {what}")
    return tuple(value)


def game_from_dict(data: dict) -> Game:
    for key in ("players", "actions", "states", "init", "weights", "transitions"):
        if key not in data:
            raise GameFormatError(f"missing field {key!r}")
    players = _names(data["players"], "players")
    acts_map = data["actions"]
    if not isinstance(acts_map, dict) or set(acts_map) != set(players):
        raise GameFormatError("actions must map every player (and only players) to an array")
    actions = tuple(_names(acts_map[p], f"actions of {p}") for p in players)
    states = _names(data["states"], "states")
    sidx = {s: i for i, s in enumerate(states)}
    init = data["init"]
    if init not in sidx:
        raise GameFormatError(f"unknown initial state {init!r}")

    labels_map = data.get("labels", {})
    if not isinstance(labels_map, dict):
        raise GameFormatError("labels must be an object")
    for s in labels_map:
        if s not in sidx:
            raise GameFormatError(f"labels reference unknown state {s!r}")
    labels = []
    for s in states:
        props = labels_map.get(s, [])
        if not isinstance(props, list) or not all(isinstance(p, str) for p in props):
            raise GameFormatError(f"labels of {s!r} must be an array of strings")
        labels.append(frozenset(props))
    used = frozenset().union(*labels)
    if "propositions" in data:
        universe = frozenset(_names(data["propositions"], "propositions")) if data["propositions"] else frozenset()
        extra = used - universe
        if extra:
            raise GameFormatError(f"undeclared propositions {sorted(extra)}")
    else:
        universe = used

    wmap = data["weights"]
    if not isinstance(wmap, dict):
        raise GameFormatError("weights must be an object")
    for s in wmap:
        if s not in sidx:
            raise GameFormatError(f"weights reference unknown state {s!r}")
    weights = []
    for s in states:
        row = wmap.get(s)
        if not isinstance(row, dict):
            raise GameFormatError(f"missing weights for state {s!r}")
        for p in row:
            if p not in players:
                raise GameFormatError(f"weights of {s!r} reference unknown player {p!r}")
        vec = []
        for p in players:
            if p not in row:
                raise GameFormatError(f"missing weight of player {p!r} at state {s!r}")
            w = row[p]
            if isinstance(w, bool) or not isinstance(w, int):
                raise GameFormatError(f"non-integer weight {w!r} for player {p!r} at state {s!r}")
            vec.append(w)
        weights.append(tuple(vec))

    aidx = [{a: i for i, a in enumerate(acts)} for acts in actions]
    radix = []
    m = 1
    for acts in reversed(actions):
        radix.append(m)
        m *= len(acts)
    radix.reverse()
    n_profiles = m

    tmap = data["transitions"]
    if not isinstance(tmap, dict):
        raise GameFormatError("transitions must be an object")
    for s in tmap:
        if s not in sidx:
            raise GameFormatError(f"transitions reference unknown state {s!r}")
    table = []
    for s in states:
        row = tmap.get(s)
        if not isinstance(row, dict):
            raise GameFormatError(f"partial transition function: no entries for state {s!r}")
        succ = [-1] * n_profiles
        for key, t in row.items():
            parts = [a.strip() for a in key.split(",")]
            if len(parts) != len(players):
                raise GameFormatError(f"profile key {key!r} at {s!r} must list {len(players)} actions")
            code = 0
            for i, a in enumerate(parts):
                if a not in aidx[i]:
                    raise GameFormatError(f"unknown action {a!r} of player {players[i]!r} in {key!r}")
                code += aidx[i][a] * radix[i]
            if t not in sidx:
                raise GameFormatError(f"transition {s!r},{key!r} targets unknown state {t!r}")
            if succ[code] >= 0:
                raise GameFormatError(f"duplicate transition entry {key!r} at state {s!r}")
            succ[code] = sidx[t]
        if -1 in succ:
            code = succ.index(-1)
            missing = ",".join(actions[i][(code // r) % len(actions[i])] for i, r in enumerate(radix))
            raise GameFormatError(f"partial transition function: state {s!r} lacks profile {missing!r}")
        table.append(tuple(succ))
    return Game(players, actions, states, init, tuple(labels), tuple(weights), tuple(table), universe)


def parse_game(text: str) -> Game:
    return game_from_dict(_load(text, "game"))


def game_to_dict(g: Game) -> dict:
    return {
        "players": list(g.players),
        "actions": {p: list(a) for p, a in zip(g.players, g.actions)},
        "states": list(g.states),
        "init": g.init,
        "propositions": sorted(g.propositions),
        "labels": {s: sorted(g.labels[i]) for i, s in enumerate(g.states) if g.labels[i]},
        "weights": {s: dict(zip(g.players, g.weights[i])) for i, s in enumerate(g.states)},
        "transitions": {
            s: {g.profile_key(c): g.states[t] for c, t in enumerate(g.table[i])}
            for i, s in enumerate(g.states)
        },
    }


def dump_game(g: Game) -> str:
    return json.dumps(game_to_dict(g), indent=1, sort_keys=True)


def build_game(players, actions, states, init, weights, transition, labels=None) -> Game:
    """Construct a game from Python data; ``transition(state, profile_names)``
    must return the successor name for every full profile."""
    trans = {}
    for s in states:
        trans[s] = {}
        for ap in itertools.product(*(actions[p] for p in players)):
            trans[s][",".join(ap)] = transition(s, ap)
    data = {
        "players": list(players),
        "actions": {p: list(actions[p]) for p in players},
        "states": list(states),
        "init": init,
        "labels": {s: sorted(v) for s, v in (labels or {}).items()},
        "weights": {s: dict(zip(players, weights[s])) for s in states},
        "transitions": trans,
    }
    return game_from_dict(data)


def profile_from_dict(g: Game, data: dict) -> StrategyProfile:
    machines_map = data.get("machines")
    if not isinstance(machines_map, dict):
        raise GameFormatError("profile file needs a 'machines' object")
    if set(machines_map) != set(g.players):
        missing = set(g.players) - set(machines_map)
        extra = set(machines_map) - set(g.players)
        raise GameFormatError(f"profile must give one machine per player (missing {sorted(missing)}, unknown {sorted(extra)})")
    machines = []
    for pi, p in enumerate(g.players):
        m = machines_map[p]
        if not isinstance(m, dict):
            raise GameFormatError(f"machine of {p!r} must be an object")
        qs = _names(m.get("states"), f"machine states of {p!r}")
        qidx = {q: i for i, q in enumerate(qs)}
        if m.get("init") not in qidx:
            raise GameFormatError(f"machine of {p!r}: unknown initial state {m.get('init')!r}")
        delta_map = m.get("delta")
        act_map = m.get("act")
        if not isinstance(delta_map, dict) or not isinstance(act_map, dict):
            raise GameFormatError(f"machine of {p!r} needs 'delta' and 'act' objects")
        delta = []
        acts = []
        for q in qs:
            row = delta_map.get(q)
            if not isinstance(row, dict):
                raise GameFormatError(f"machine of {p!r}: delta undefined at {q!r}")
            for s in row:
                if s not in g.state_index:
                    raise GameFormatError(f"machine of {p!r}: delta references unknown state {s!r}")
            out = []
            for s in g.states:
                if s not in row:
                    raise GameFormatError(f"machine of {p!r}: delta undefined at ({q!r}, {s!r})")
                if row[s] not in qidx:
                    raise GameFormatError(f"machine of {p!r}: unknown internal state {row[s]!r}")
                out.append(qidx[row[s]])
            delta.append(tuple(out))
            a = act_map.get(q)
            if a not in g.action_index[pi]:
                raise GameFormatError(f"machine of {p!r}: action {a!r} at {q!r} not in the player's action set")
            acts.append(g.action_index[pi][a])
        for q in delta_map:
            if q not in qidx:
                raise GameFormatError(f"machine of {p!r}: delta references unknown internal state {q!r}")
        machines.append(StrategyMachine(qs, qidx[m["init"]], tuple(delta), tuple(acts)))
    return StrategyProfile(tuple(machines))


def parse_profile(g: Game, text: str) -> StrategyProfile:
    return profile_from_dict(g, _load(text, "profile"))


def profile_to_dict(g: Game, p: StrategyProfile) -> dict:
    out = {}
    for pi, (name, m) in enumerate(zip(g.players, p.machines)):
        out[name] = {
            "states": list(m.internal_states),
            "init": m.internal_states[m.init],
            "delta": {q: {s: m.internal_states[m.delta[qi][si]] for si, s in enumerate(g.states)}
                      for qi, q in enumerate(m.internal_states)},
            "act": {q: g.actions[pi][m.act[qi]] for qi, q in enumerate(m.internal_states)},
        }
    return {"machines": out}


def dump_profile(g: Game, p: StrategyProfile) -> str:
    return json.dumps(profile_to_dict(g, p), indent=1, sort_keys=True)


def constant_profile(g: Game, actions: Sequence[str]) -> StrategyProfile:
    """Memoryless profile where player i always plays ``actions[i]``."""
    return StrategyProfile(tuple(
        StrategyMachine.constant(g.action_index[i][a], len(g.states)) for i, a in enumerate(actions)))
