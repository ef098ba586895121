"""Shared pieces for the test modules: fixture lists, random small games
and an exact vertex enumerator used to probe value sets."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from mpcore.game import build_game
from mpcore.fixtures import GAMES, PROFILES

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def fixture_games():
    return [(name, mk()) for name, mk in GAMES.items()]


def fixture_profiles():
    out = []
    for name, (mk_game, mk_profile) in PROFILES.items():
        g = mk_game()
        out.append((name, g, mk_profile(g)))
    return out


@st.composite
def small_games(draw, max_players=3, max_states=3, max_actions=2, max_weight=2):
    n = draw(st.integers(1, max_players))
    k = draw(st.integers(1, max_states))
    players = [str(i + 1) for i in range(n)]
    actions = {p: [f"a{j}" for j in range(draw(st.integers(1, max_actions)))] for p in players}
    states = [f"s{j}" for j in range(k)]
    weights = {s: tuple(draw(st.integers(-max_weight, max_weight)) for _ in players) for s in states}
    profiles = list(itertools.product(*(actions[p] for p in players)))
    table = {(s, ap): draw(st.sampled_from(states)) for s in states for ap in profiles}
    labels = {s: {f"p{j}"} for j, s in enumerate(states)}
    return build_game(players, actions, states, "s0", weights, lambda s, ap: table[(s, ap)], labels)


def solve_square(rows, rhs):
    """Unique solution of a square rational system, or None when singular."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def vertices(poly):
    """Vertices of a pointed polyhedron given by inequalities (brute force)."""
    hs = list(poly.ineqs)
    out = set()
    for combo in itertools.combinations(hs, poly.dim):
        x = solve_square([h.normal for h in combo], [h.bound for h in combo])
        if x is not None and poly.contains(x):
            out.add(x)
    return sorted(out)


def random_decrease(rng: random.Random, x, scale=3):
    return tuple(v - Fraction(rng.randint(0, 4 * scale), rng.randint(1, 4)) for v in x)


def random_increase(rng: random.Random, x, scale=3):
    return tuple(v + Fraction(rng.randint(0, 4 * scale), rng.randint(1, 4)) for v in x)


def random_mixture(rng: random.Random, points):
    ws = [rng.randint(0, 5) for _ in points]
    if not any(ws):
        ws[0] = 1
    tot = sum(ws)
    return tuple(sum(Fraction(w, tot) * p[i] for w, p in zip(ws, points)) for i in range(len(points[0])))
