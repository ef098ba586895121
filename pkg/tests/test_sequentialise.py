import itertools
from fractions import Fraction

import networkx as nx
from hypothesis import given, settings, strategies as st

from mpcore.fixtures import single_loop, three_sinks, two_robots
from mpcore.game import Coalition, build_game
from mpcore.geometry import down_conv_membership
from mpcore.sequentialise import (MemorylessP2, count_p2, enumerate_p2, induced_subgame, minimal_hitting_sets,
                                  p2_responses, sequentialise)
from mpcore.values import can_enforce

from helpers import small_games


def test_grand_coalition_makes_player_two_a_dummy():
    g = two_robots()
    m = sequentialise(g, Coalition.grand(g))
    assert len(m.v2) == len(g.states) * 4
    assert all(len(m.succ2[v]) == 1 for v in m.v2)
    assert count_p2(m) == 1 and len(list(enumerate_p2(m))) == 1


def test_one_player_game():
    g = single_loop()
    m = sequentialise(g, Coalition.grand(g))
    assert all(len(m.succ2[v]) == 1 for v in m.v2)


def test_weights_restricted_to_coalition():
    g = three_sinks()
    m = sequentialise(g, Coalition.of(g, ["2", "3"]))
    assert m.dims == (1, 2)
    assert m.weight(g.state_index["t"]) == (1, 0)


def test_player_one_fixed_to_heads():
    g = three_sinks()
    c = Coalition.of(g, ["2", "3"])
    m = sequentialise(g, c)
    s = g.state_index["s"]
    heads = MemorylessP2(tuple(g.table[v[0]][g.encode((0,) + v[1])] for v in m.v2))
    graph = induced_subgame(m, heads)
    assert graph[(s, (0, 0))] == (g.state_index["t"],)
    assert set(m.succ2[(s, (0, 0))]) == {g.state_index["t"], s}


def test_single_player_count_is_product_of_images():
    g = three_sinks()
    m = sequentialise(g, Coalition.of(g, ["2"]))
    expected = 1
    for s in range(len(g.states)):
        for a2 in range(2):
            expected *= len({g.table[s][g.encode((a1, a2, a3))] for a1 in range(2) for a3 in range(2)})
    assert count_p2(m) == expected == len(list(enumerate_p2(m)))


def test_one_branching_state():
    g = build_game(["1", "2"], {"1": ["a"], "2": ["x", "y", "z"]}, ["s", "u", "v"], "s",
                   {"s": (0, 0), "u": (0, 0), "v": (0, 0)},
                   lambda s, ap: {"x": "s", "y": "u", "z": "v"}[ap[1]] if s == "s" else s)
    m = sequentialise(g, Coalition.of(g, ["1"]))
    assert count_p2(m) == 3


@settings(max_examples=200)
@given(st.lists(st.frozensets(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=4))
def test_minimal_hitting_sets(family):
    found = set(minimal_hitting_sets(family))
    universe = sorted(frozenset().union(*family))
    hitting = [frozenset(c) for k in range(len(universe) + 1)
               for c in itertools.combinations(universe, k) if all(set(c) & f for f in family)]
    minimal = {h for h in hitting if not any(o < h for o in hitting)}
    assert found == minimal


def literal_enforce(g, c, s, x):
    """can_enforce by enumerating every memoryless player-2 strategy of the MMPG."""
    m = sequentialise(g, c)
    for s2 in enumerate_p2(m):
        graph = nx.DiGraph()
        for u, vs in induced_subgame(m, s2).items():
            graph.add_node(u)
            graph.add_edges_from((u, v) for v in vs)
        live = graph.subgraph(nx.descendants(graph, s) | {s})
        ok = False
        for comp in nx.strongly_connected_components(live):
            pts = []
            for cyc in nx.simple_cycles(live.subgraph(comp)):
                ws = [m.weight(u) for u in cyc]
                pts.append(tuple(Fraction(sum(w[i] for w in ws), len(ws)) for i in range(len(c))))
            if pts and down_conv_membership(pts, x):
                ok = True
                break
        if not ok:
            return False
    return True


@settings(max_examples=40)
@given(small_games(max_players=3, max_states=3), st.data())
def test_reduced_responses_match_literal_enumeration(g, data):
    members = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=g.n, unique=True))
    c = Coalition(tuple(sorted(members)))
    if count_p2(sequentialise(g, c)) > 300:
        return
    r = p2_responses(g, c)
    assert all(opts for opts in r.options)
    for _ in range(4):
        x = tuple(Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 3))) for _ in c.members)
        assert can_enforce(g, c, 0, x) == literal_enforce(g, c, 0, x)
