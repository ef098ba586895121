"""Hard-instance generators with brute-force ground truth.

* QBF with one alternation (DNF matrix) -> a ``dominated`` query.
* QBF with two alternations (CNF matrix) -> a ``core_nonempty`` query.
* A family of DFAs -> an ``exists_beneficial_deviation`` query.

Each generator assigns every state to one controlling player (two for the
veto states of the CNF construction). A controller owns a fixed list of
options per state; action ``a{k}`` picks option ``k`` and indices beyond
the end are clamped to the last option. Non-controllers never matter.
Clamping, rather than adding stay-in-place moves, keeps the option sets
exactly as drawn: an extra "stay" at the initial state would hand the
coalition a free zero-payoff loop.

Text formats
------------
Formulas, one directive per line, ``#`` starts a comment::

    exists x1 x2
    forall y1 y2
    clause x1 x2 y1
    clause x1 -x2 -y2

Two quantifier blocks (exists, forall) give a DNF formula whose clauses
are conjunctions; three blocks (exists, forall, exists) give a CNF formula
whose clauses are disjunctions. ``-`` or ``!`` negates. Clauses with fewer
than three literals are padded by repeating their last literal.

Automata, separated by lines containing ``---``::

    states q0 q1
    alphabet s0
    init q0
    accept q1
    q0 s0 q1
    q1 s0 q1
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections import deque

from .game import Game, StrategyMachine, StrategyProfile, build_game

QBF_MAX_VARS = 16

Literal = tuple[str, bool]  # (variable, polarity)


class FormulaError(ValueError):
    pass


def _lit_str(l: Literal) -> str:
    return l[0] if l[1] else "-" + l[0]


def _check_blocks(blocks: tuple[tuple[str, ...], ...], clauses) -> None:
    names = [v for b in blocks for v in b]
    if len(set(names)) != len(names):
        raise FormulaError("a variable is declared twice")
    known = set(names)
    if not clauses:
        raise FormulaError("at least one clause is required")
    for c in clauses:
        if len(c) != 3:
            raise FormulaError(f"clause {c} must have exactly 3 literals")
        for v, pol in c:
            if v not in known:
                raise FormulaError(f"undeclared variable {v!r}")
            if not isinstance(pol, bool):
                raise FormulaError(f"polarity of {v!r} must be a bool")


@dataclass(frozen=True)
class Qbf2Formula:
    """exists xs. forall ys. OR of 3-literal conjunctions."""

    xs: tuple[str, ...]
    ys: tuple[str, ...]
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        _check_blocks((self.xs, self.ys), self.clauses)

    @property
    def blocks(self):
        return (("exists", self.xs), ("forall", self.ys))

    def matrix(self, v: dict[str, bool]) -> bool:
        return any(all(v[x] == pol for x, pol in c) for c in self.clauses)

    def __str__(self):
        return _format(self)


@dataclass(frozen=True)
class Qbf3Formula:
    """exists xs. forall ys. exists zs. AND of 3-literal disjunctions."""

    xs: tuple[str, ...]
    ys: tuple[str, ...]
    zs: tuple[str, ...]
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        _check_blocks((self.xs, self.ys, self.zs), self.clauses)

    @property
    def blocks(self):
        return (("exists", self.xs), ("forall", self.ys), ("exists", self.zs))

    def matrix(self, v: dict[str, bool]) -> bool:
        return all(any(v[x] == pol for x, pol in c) for c in self.clauses)

    def __str__(self):
        return _format(self)


def _format(f) -> str:
    lines = [f"{q} {' '.join(vs)}".rstrip() for q, vs in f.blocks]
    lines += ["clause " + " ".join(_lit_str(l) for l in c) for c in f.clauses]
    return "\n".join(lines) + "\n"


def pad_clause(lits) -> tuple[Literal, Literal, Literal]:
    lits = tuple(lits)
    if not 1 <= len(lits) <= 3:
        raise FormulaError("a clause has between 1 and 3 literals")
    return lits + (lits[-1],) * (3 - len(lits))


def parse_formula(text: str) -> Qbf2Formula | Qbf3Formula:
    blocks: list[tuple[str, tuple[str, ...]]] = []
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        head, rest = line[0], line[1:]
        if head in ("exists", "forall"):
            if clauses:
                raise FormulaError(f"line {lineno}: quantifier after a clause")
            blocks.append((head, tuple(rest)))
        elif head == "clause":
            lits = []
            for tok in rest:
                neg = tok[0] in "-!~"
                name = tok[1:] if neg else tok
                if not name:
                    raise FormulaError(f"line {lineno}: empty literal")
                lits.append((name, not neg))
            try:
                clauses.append(pad_clause(lits))
            except FormulaError as e:
                raise FormulaError(f"line {lineno}: {e}") from None
        else:
            raise FormulaError(f"line {lineno}: unknown directive {head!r}")
    kinds = tuple(q for q, _ in blocks)
    if kinds == ("exists", "forall"):
        return Qbf2Formula(blocks[0][1], blocks[1][1], tuple(clauses))
    if kinds == ("exists", "forall", "exists"):
        return Qbf3Formula(blocks[0][1], blocks[1][1], blocks[2][1], tuple(clauses))
    raise FormulaError("expected quantifier blocks 'exists, forall' or 'exists, forall, exists'")


def qbf_eval(f: Qbf2Formula | Qbf3Formula) -> bool:
    """Truth value by expanding every quantifier."""
    blocks = f.blocks
    nvars = sum(len(vs) for _, vs in blocks)
    if nvars > QBF_MAX_VARS:
        raise FormulaError(f"{nvars} variables exceed the exhaustive cap of {QBF_MAX_VARS}")

    def go(b: int, v: dict[str, bool]) -> bool:
        if b == len(blocks):
            return f.matrix(v)
        q, vs = blocks[b]
        outcomes = (go(b + 1, {**v, **dict(zip(vs, bits))})
                    for bits in itertools.product((False, True), repeat=len(vs)))
        return any(outcomes) if q == "exists" else all(outcomes)

    return go(0, {})


# --- shared plumbing ----------------------------------------------------------

def _option_game(players, states, init, weights, options, controller, labels):
    """Build a game where ``controller[s]`` picks among ``options[s]``."""
    width = {p: 1 for p in players}
    for s, c in controller.items():
        width[c] = max(width[c], len(options[s]))
    actions = {p: [f"a{k}" for k in range(width[p])] for p in players}
    pos = {p: i for i, p in enumerate(players)}

    def tr(s, ap):
        opts = options[s]
        c = controller.get(s)
        if c is None:
            return opts[0]
        k = actions[c].index(ap[pos[c]])
        return opts[min(k, len(opts) - 1)]

    return build_game(players, actions, states, init, weights, tr, labels)


# --- one alternation: dominated ----------------------------------------------

def _clashing(c1, c2, variables) -> bool:
    a = {(v, p) for v, p in c1 if v in variables}
    b = {(v, p) for v, p in c2 if v in variables}
    return any((v, not p) in b for v, p in a)


def gen_qsat2_dominated(f: Qbf2Formula) -> tuple[Game, str, tuple[int, ...]]:
    """Game, start state and query vector (-1,...,-1,0) whose ``dominated``
    answer equals the truth of ``f``.

    Players ``1..2q`` pair up per universal variable, then E and A. From the
    start E picks a clause, A picks one of its literals. Existential literals
    loop forever at zero weight. At a literal ``y_k`` player ``2k`` pays
    ``2q`` to player ``2k-1`` (the other way round at ``-y_k``); the paying
    player controls the state and may loop, leave for the sink, or jump to
    another clause mentioning ``y_k`` that does not clash on existential
    literals. The sink costs every player but A one per step.
    """
    if not isinstance(f, Qbf2Formula):
        raise FormulaError("expected an exists-forall formula with a DNF matrix")
    q, r = len(f.ys), len(f.clauses)
    xs, ys = set(f.xs), {y: k for k, y in enumerate(f.ys, 1)}
    players = [str(i) for i in range(1, 2 * q + 1)] + ["E", "A"]
    n = len(players)
    clause = [f"C{i}" for i in range(1, r + 1)]
    lit = [[f"l{i}_{j}" for j in range(1, 4)] for i in range(1, r + 1)]
    states = ["init"] + clause + [s for row in lit for s in row] + ["sink"]

    weights = {s: [0] * n for s in states}
    weights["sink"] = [-1] * (n - 1) + [0]
    options = {"init": clause, "sink": ["sink"]}
    controller = {"init": "E"}
    labels = {"init": {"init"}, "sink": {"sink"}}
    for i, c in enumerate(f.clauses):
        options[clause[i]] = lit[i]
        controller[clause[i]] = "A"
        labels[clause[i]] = {"clause"}
        for j, (v, pol) in enumerate(c):
            s = lit[i][j]
            labels[s] = {"literal"}
            if v in xs:
                options[s] = [s]
                continue
            k = ys[v]
            gain, pay = (2 * k - 2, 2 * k - 1) if pol else (2 * k - 1, 2 * k - 2)
            weights[s][gain], weights[s][pay] = 2 * q, -2 * q
            controller[s] = players[pay]
            jumps = [clause[h] for h, ch in enumerate(f.clauses)
                     if h != i and any(u == v for u, _ in ch) and not _clashing(c, ch, xs)]
            options[s] = [s, "sink"] + jumps
    g = _option_game(players, states, "init", {s: tuple(w) for s, w in weights.items()},
                     options, controller, labels)
    return g, "init", tuple([-1] * (n - 1) + [0])


# --- two alternations: non-emptiness ------------------------------------------

GADGET_WEIGHTS = {  # (P, Q, R, E, everyone else)
    "I": (-1, -1, -1, 0, 1),
    "U": (2, 1, 0, 0, 1),
    "M": (0, 2, 1, 0, 1),
    "B": (1, 0, 2, 0, 1),
}
GADGET_MOVES = {  # moves of (P, Q, R) at I
    ("H", "H", "H"): "U", ("H", "H", "T"): "U",
    ("H", "T", "H"): "M", ("H", "T", "T"): "I",
    ("T", "H", "H"): "I", ("T", "H", "T"): "B",
    ("T", "T", "H"): "M", ("T", "T", "T"): "B",
}


def sink_gadget() -> Game:
    """Three players, an entry state I and three absorbing states; every
    profile admits a beneficial deviation."""
    players = ["P", "Q", "R"]
    weights = {s: w[:3] for s, w in GADGET_WEIGHTS.items()}
    return build_game(players, {p: ["H", "T"] for p in players}, list(GADGET_WEIGHTS), "I",
                      weights, lambda s, ap: GADGET_MOVES[ap] if s == "I" else s,
                      {s: {s} for s in GADGET_WEIGHTS})


def gen_qsat3_nonemptiness(f: Qbf3Formula, stay_chooser: str = "A") -> Game:
    """Game whose core is non-empty exactly when ``f`` is true.

    A picks a clause, E one of its literals. At ``x_k`` the player owning it
    (``2k-1``, or ``2k`` at ``-x_k``) returns to the start or enters the sink
    gadget; it earns ``3r`` there while its partner loses ``3r``. Universal
    literals lead straight into the gadget. At ``z_k`` the ``stay_chooser``
    (A by default, E as an alternative reading) stays or moves to any clause
    that does not clash on universal literals, and the literal's owner may
    veto that choice by entering the gadget.
    """
    if not isinstance(f, Qbf3Formula):
        raise FormulaError("expected an exists-forall-exists formula with a CNF matrix")
    if stay_chooser not in ("A", "E"):
        raise ValueError("stay_chooser is 'A' or 'E'")
    p, t, r = len(f.xs), len(f.zs), len(f.clauses)
    xs = {x: k for k, x in enumerate(f.xs, 1)}
    zs = {z: k for k, z in enumerate(f.zs, 1)}
    yset = set(f.ys)
    players = [str(i) for i in range(1, 2 * (p + t) + 1)] + ["E", "A", "P", "Q", "R"]
    n = len(players)
    pi = {pl: i for i, pl in enumerate(players)}
    clause = [f"C{i}" for i in range(1, r + 1)]
    lit = [[f"l{i}_{j}" for j in range(1, 4)] for i in range(1, r + 1)]
    gadget = list(GADGET_WEIGHTS)
    states = ["init"] + clause + [s for row in lit for s in row] + gadget

    weights = {s: [0] * n for s in states}
    for s, (wp, wq, wr, we, other) in GADGET_WEIGHTS.items():
        weights[s] = [other] * n
        for pl, w in zip("PQRE", (wp, wq, wr, we)):
            weights[s][pi[pl]] = w

    width = {pl: 1 for pl in players}
    plan = {}  # state -> (chooser, options, veto player or None)
    plan["init"] = ("A", clause, None)
    labels = {"init": {"init"}, **{s: {"sink", s} for s in gadget}}
    for i, c in enumerate(f.clauses):
        plan[clause[i]] = ("E", lit[i], None)
        labels[clause[i]] = {"clause"}
        for j, (v, pol) in enumerate(c):
            s = lit[i][j]
            labels[s] = {"literal"}
            if v in yset:
                plan[s] = (None, ["I"], None)
                continue
            k = xs[v] if v in xs else p + zs[v]
            own, other = (2 * k - 2, 2 * k - 1) if pol else (2 * k - 1, 2 * k - 2)
            weights[s][own], weights[s][other] = 3 * r, -3 * r
            if v in xs:
                plan[s] = (players[own], ["init", "I"], None)
            else:
                moves = [s] + [clause[h] for h, ch in enumerate(f.clauses) if not _clashing(c, ch, yset)]
                plan[s] = (stay_chooser, moves, players[own])
    for s, (ch, opts, veto) in plan.items():
        if ch is not None:
            width[ch] = max(width[ch], len(opts))
        if veto is not None:
            width[veto] = max(width[veto], 2)
    actions = {pl: [f"a{k}" for k in range(width[pl])] for pl in players}
    for pl in "PQR":
        actions[pl] = ["H", "T"]
    for s, (ch, opts, veto) in plan.items():
        if veto is not None:
            actions[veto] = ["follow", "veto"] if width[veto] == 2 else actions[veto]

    def tr(s, ap):
        if s == "I":
            return GADGET_MOVES[tuple(ap[pi[pl]] for pl in "PQR")]
        if s in ("U", "M", "B"):
            return s
        ch, opts, veto = plan[s]
        if veto is not None and ap[pi[veto]] == "veto":
            return "I"
        if ch is None:
            return opts[0]
        k = actions[ch].index(ap[pi[ch]])
        return opts[min(k, len(opts) - 1)]

    return build_game(players, actions, states, "init",
                      {s: tuple(w) for s, w in weights.items()}, tr, labels)


# --- automata: beneficial deviations -----------------------------------------

@dataclass(frozen=True)
class Dfa:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: dict  # (state, symbol) -> state
    init: str
    accept: frozenset[str]

    def __post_init__(self):
        if len(set(self.states)) != len(self.states) or not self.states:
            raise FormulaError("automaton states must be distinct and non-empty")
        if self.init not in self.states or not self.accept <= set(self.states):
            raise FormulaError("initial/accepting states must be automaton states")
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise FormulaError(f"automaton is partial: no move from {q!r} on {a!r}")
                if self.delta[(q, a)] not in self.states:
                    raise FormulaError(f"move from {q!r} on {a!r} leaves the state set")
        extra = set(self.delta) - {(q, a) for q in self.states for a in self.alphabet}
        if extra:
            raise FormulaError(f"moves on undeclared states or symbols: {sorted(extra)}")

    def run(self, word) -> str:
        q = self.init
        for a in word:
            q = self.delta[(q, a)]
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accept

    def restricted(self, symbols) -> "Dfa":
        keep = tuple(a for a in self.alphabet if a in set(symbols))
        return Dfa(self.states, keep, {k: v for k, v in self.delta.items() if k[1] in keep},
                   self.init, self.accept)

    def single_accepting(self, fresh: str = "#") -> "Dfa":
        """Add symbol ``fresh`` and state ``f`` so that only ``f`` accepts."""
        if len(self.accept) == 1:
            return self
        f = "f"
        while f in self.states:
            f += "'"
        delta = dict(self.delta)
        for q in self.states + (f,):
            delta[(q, fresh)] = f if q in self.accept or q == f else q
        for a in self.alphabet:
            delta[(f, a)] = f
        return Dfa(self.states + (f,), self.alphabet + (fresh,), delta, self.init, frozenset({f}))


def parse_dfas(text: str) -> list[Dfa]:
    out = []
    for chunk in text.split("\n---"):
        fields: dict[str, list[str]] = {}
        delta = {}
        for lineno, raw in enumerate(chunk.splitlines(), 1):
            toks = raw.split("#", 1)[0].split()
            if not toks or toks == ["---"]:
                continue
            if toks[0] in ("states", "alphabet", "init", "accept"):
                fields[toks[0]] = toks[1:]
            elif len(toks) == 3:
                if (toks[0], toks[1]) in delta:
                    raise FormulaError(f"duplicate move from {toks[0]!r} on {toks[1]!r}")
                delta[(toks[0], toks[1])] = toks[2]
            else:
                raise FormulaError(f"cannot read automaton line {raw!r}")
        if not fields and not delta:
            continue
        for key in ("states", "alphabet", "init", "accept"):
            if key not in fields:
                raise FormulaError(f"automaton is missing '{key}'")
        if len(fields["init"]) != 1:
            raise FormulaError("exactly one initial state")
        out.append(Dfa(tuple(fields["states"]), tuple(fields["alphabet"]), delta,
                       fields["init"][0], frozenset(fields["accept"])))
    if not out:
        raise FormulaError("no automaton given")
    return out


def dump_dfas(automata) -> str:
    parts = []
    for a in automata:
        lines = [f"states {' '.join(a.states)}", f"alphabet {' '.join(a.alphabet)}",
                 f"init {a.init}", f"accept {' '.join(sorted(a.accept))}"]
        lines += [f"{q} {s} {a.delta[(q, s)]}" for q in a.states for s in a.alphabet]
        parts.append("\n".join(lines))
    return "\n---\n".join(parts) + "\n"


def dfa_intersection_nonempty(automata) -> bool:
    """Is some word accepted by all automata? Breadth-first search of the product."""
    automata = list(automata)
    if not automata:
        raise FormulaError("no automaton given")
    sigma = automata[0].alphabet
    if any(set(a.alphabet) != set(sigma) for a in automata):
        raise FormulaError("automata must share one alphabet")
    start = tuple(a.init for a in automata)
    seen = {start}
    todo = deque([start])
    while todo:
        qs = todo.popleft()
        if all(q in a.accept for q, a in zip(qs, automata)):
            return True
        for s in sigma:
            nxt = tuple(a.delta[(q, s)] for q, a in zip(qs, automata))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


ARENA = ("s0", "s1", "s2")


def gen_dfa_bendev(automata) -> tuple[Game, StrategyProfile]:
    """Three-state game plus a profile built from the automata.

    Player ``i`` plays its current automaton state as its action; its
    machine reads the arena state as the input symbol, so symbols are arena
    state names and a symbol missing from the alphabet leaves the automaton
    where it is. At s0 the play moves to s2 when every player shows an
    accepting state, to s1 when every player shows ``d``, and stays
    otherwise. s1 and s2 are absorbing and pay everyone 1; s0 pays 0.
    The profile has a beneficial deviation iff no ``k`` makes every
    automaton accept ``s0^k``.
    """
    automata = list(automata)
    if not automata:
        raise FormulaError("no automaton given")
    players = [str(i) for i in range(1, len(automata) + 1)]
    actions = {}
    for p, a in zip(players, automata):
        d = "d"
        while d in a.states:
            d += "'"
        actions[p] = list(a.states) + [d]

    def tr(s, ap):
        if s != "s0":
            return s
        if all(x in a.accept for x, a in zip(ap, automata)):
            return "s2"
        if all(x == actions[p][-1] for x, p in zip(ap, players)):
            return "s1"
        return "s0"

    weights = {"s0": (0,) * len(players), "s1": (1,) * len(players), "s2": (1,) * len(players)}
    g = build_game(players, actions, list(ARENA), "s0", weights, tr, {s: {s} for s in ARENA})
    machines = []
    for a in automata:
        qi = {q: k for k, q in enumerate(a.states)}
        delta = tuple(tuple(qi[a.delta[(q, s)]] if (q, s) in a.delta else qi[q] for s in g.states)
                      for q in a.states)
        machines.append(StrategyMachine(a.states, qi[a.init], delta, tuple(range(len(a.states)))))
    return g, StrategyProfile(tuple(machines))


def dfa_bendev_expected(automata) -> bool:
    """Ground truth for ``gen_dfa_bendev``: a deviation exists iff the
    automata share no accepted word of the form ``s0^k``."""
    unary = [Dfa(a.states, ("s0",), {(q, "s0"): a.delta.get((q, "s0"), q) for q in a.states},
                 a.init, a.accept) for a in automata]
    return not dfa_intersection_nonempty(unary)


# --- exhaustive formula families ---------------------------------------------

def _clause_pool(variables):
    pool = []
    for size in (1, 2, 3):
        for vs in itertools.combinations(variables, size):
            for pols in itertools.product((True, False), repeat=size):
                pool.append(frozenset(zip(vs, pols)))
    return pool


def _symmetries(blocks):
    """Renamings that permute variables inside each block and flip polarities."""
    names = [v for b in blocks for v in b]
    for perms in itertools.product(*(itertools.permutations(b) for b in blocks)):
        image = [v for p in perms for v in p]
        for flips in itertools.product((False, True), repeat=len(names)):
            yield {v: (w, fl) for v, w, fl in zip(names, image, flips)}


def _enumerate(blocks, max_clauses: int):
    variables = [v for b in blocks for v in b]
    pool = _clause_pool(variables)
    where = {c: i for i, c in enumerate(pool)}
    perms = [tuple(where[frozenset((m[v][0], pol != m[v][1]) for v, pol in c)] for c in pool)
             for m in _symmetries(blocks)]
    for r in range(1, max_clauses + 1):
        for cs in itertools.combinations(range(len(pool)), r):
            if min(tuple(sorted(pm[i] for i in cs)) for pm in perms) != cs:
                continue  # not the least member of its class
            yield tuple(pad_clause(sorted(pool[i])) for i in cs)


def enumerate_qbf2(p: int, q: int, max_clauses: int):
    """Every exists-forall DNF formula over ``p`` + ``q`` variables with up
    to ``max_clauses`` distinct non-contradictory clauses, one per class of
    block-preserving renamings and polarity flips."""
    xs = tuple(f"x{k}" for k in range(1, p + 1))
    ys = tuple(f"y{k}" for k in range(1, q + 1))
    for cs in _enumerate((xs, ys), max_clauses):
        yield Qbf2Formula(xs, ys, cs)


def enumerate_qbf3(p: int, q: int, t: int, max_clauses: int):
    xs = tuple(f"x{k}" for k in range(1, p + 1))
    ys = tuple(f"y{k}" for k in range(1, q + 1))
    zs = tuple(f"z{k}" for k in range(1, t + 1))
    for cs in _enumerate((xs, ys, zs), max_clauses):
        yield Qbf3Formula(xs, ys, zs, cs)
