import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mpcore.decisions import (a_core_gr1, check_circulation, core_nonempty, dominated, e_core_gr1,
                              exists_beneficial_deviation, membership, not_dominated_region, verify_domination,
                              verify_nonempty_witness, verify_undominated)
from mpcore.fixtures import (both_left_profile, go_to_t_profile, single_loop, stay_at_s_profile, stuck_profile,
                             three_sinks, three_sinks_balanced, two_robots, weak_dominance)
from mpcore.game import Coalition, constant_profile
from mpcore.gr1 import holds_on_lasso, parse_gr1, sat_states
from mpcore.oracle import NO, YES, brute_membership
from mpcore.payoff import compute_payoff, lasso_payoff

from helpers import fixture_games, fixture_profiles, random_increase, small_games


# --- examples ------------------------------------------------------------------

def test_dominated_examples():
    g = three_sinks()
    v = dominated(g, "s", (2, 1, 0))
    assert v.answer and v.witness.coalition.names(g) == ["2", "3"] and v.witness.z == (2, 1)
    assert not dominated(three_sinks_balanced(), "s", (1, 1, 1)).answer
    h = single_loop(0)
    v = dominated(h, "s", (-1,))
    assert v.answer and v.witness.coalition.members == (0,)


def test_beneficial_deviation_examples():
    g = two_robots()
    v = exists_beneficial_deviation(g, stuck_profile(g))
    assert v.answer and v.witness.coalition == Coalition.grand(g)
    assert all(z > 0 for z in v.witness.z)
    assert verify_domination(g, g.init_index, (0, 0), v.witness)
    w = weak_dominance()
    assert not exists_beneficial_deviation(w, both_left_profile(w)).answer
    flat = two_robots().with_weights({"m": (3, -1), "l": (3, -1), "r": (3, -1)})
    assert not exists_beneficial_deviation(flat, stuck_profile(flat)).answer


def test_membership_examples():
    w = weak_dominance()
    assert membership(w, both_left_profile(w)).answer
    g = two_robots()
    v = membership(g, stuck_profile(g))
    assert not v.answer and v.witness.coalition == Coalition.grand(g)
    e = three_sinks()
    v = membership(e, go_to_t_profile(e))
    assert not v.answer and v.witness.coalition.names(e) == ["2", "3"]


def test_core_nonempty_examples():
    assert not core_nonempty(three_sinks()).answer
    v = core_nonempty(three_sinks_balanced())
    assert v.answer and v.witness == (1, 1, 1)
    v = core_nonempty(single_loop(5))
    assert v.answer and v.witness == (5,)
    for method in ("search", "region"):
        assert not core_nonempty(three_sinks(), method=method).answer
        assert core_nonempty(three_sinks_balanced(), method=method).answer


def test_e_core_examples():
    g = three_sinks_balanced()
    v = e_core_gr1(g, parse_gr1("true -> GF at_s"))
    assert v.answer
    assert v.witness.x == (1, 1, 1)
    assert v.witness.lasso.names(g) == {"stem": [], "cycle": ["s"]}
    assert not e_core_gr1(three_sinks(), parse_gr1("true -> GF at_s")).answer
    assert not e_core_gr1(three_sinks(), parse_gr1("true -> true")).answer
    r = two_robots()
    v = e_core_gr1(r, parse_gr1("true -> GF l"))
    assert v.answer and v.witness.x == (1, 0)
    assert v.witness.lasso.names(r) == {"stem": ["m"], "cycle": ["l"]}


def test_a_core_examples():
    assert a_core_gr1(three_sinks(), parse_gr1("true -> GF at_s")).answer
    g = three_sinks_balanced()
    v = a_core_gr1(g, parse_gr1("true -> GF at_t"))
    assert not v.answer and v.witness.lasso.names(g) == {"stem": [], "cycle": ["s"]}
    assert a_core_gr1(single_loop(0, "p"), parse_gr1("true -> GF p")).answer


def test_a_core_two_robots_recurrence():
    # the profile stuck at r after one step is in the core and never visits l again
    g = two_robots()
    v = a_core_gr1(g, parse_gr1("true -> GF l & GF r"))
    assert not v.answer
    assert not holds_on_lasso(g, parse_gr1("true -> GF l & GF r"), v.witness.lasso)


def test_unknown_proposition_rejected():
    with pytest.raises(ValueError, match="unknown propositions"):
        e_core_gr1(two_robots(), parse_gr1("true -> GF nowhere"))


# --- properties on fixtures ----------------------------------------------------

def test_membership_is_dual_of_deviation():
    for name, g, p in fixture_profiles():
        assert membership(g, p).answer == (not exists_beneficial_deviation(g, p).answer), name


def test_brute_force_refutations_agree():
    for name, g, p in fixture_profiles():
        brute = brute_membership(g, p)
        mine = membership(g, p).answer
        if brute.answer == NO:
            assert not mine, name
        if mine:
            assert brute.answer == YES, name


def test_nonempty_matches_trivial_objective():
    for name, g in fixture_games():
        assert core_nonempty(g).answer == e_core_gr1(g, parse_gr1("true -> true")).answer, name


def undominated_points(g):
    pts = []
    v = core_nonempty(g)
    if v.answer:
        pts.append(tuple(v.witness))
    for name, h, p in fixture_profiles():
        if h.players == g.players and h.states == g.states and h.weights == g.weights:
            x = compute_payoff(h, p)
            if not dominated(g, g.init_index, x).answer:
                pts.append(x)
    return pts


def test_not_dominated_is_upward_closed():
    rng = random.Random(3)
    for name, g in fixture_games():
        for x in undominated_points(g):
            for _ in range(100):
                y = random_increase(rng, x)
                assert not dominated(g, g.init_index, y).answer, (name, x, y)


def test_region_agrees_with_dominated():
    rng = random.Random(5)
    for name, g in fixture_games():
        region = not_dominated_region(g, g.init_index).region
        top = max(max(w) for w in g.weights) + 1
        low = min(min(w) for w in g.weights) - 1
        for _ in range(60):
            x = tuple(F(rng.randint(4 * low, 4 * top), 4) for _ in range(g.n))
            assert region.contains(x) == (not dominated(g, g.init_index, x).answer), (name, x)


def test_witnesses_reverify_on_fixtures():
    rng = random.Random(11)
    for name, g in fixture_games():
        for s in range(len(g.states)):
            for _ in range(20):
                x = tuple(F(rng.randint(-4, 8), rng.randint(1, 4)) for _ in range(g.n))
                v = dominated(g, s, x)
                if v.answer:
                    assert verify_domination(g, s, x, v.witness), (name, s, x)
        v = core_nonempty(g)
        if v.answer:
            assert verify_nonempty_witness(g, v.witness)


def spec_checks(g, spec, w):
    visits = [sat_states(g, b) for b in spec.guarantees]
    return check_circulation(g, w, visits)


@pytest.mark.parametrize("text", ["true -> true", "true -> GF at_s", "true -> GF (at_t | at_m)",
                                  "GF at_s -> GF at_b"])
def test_e_core_circulations_reverify(text):
    for g in (three_sinks(), three_sinks_balanced()):
        spec = parse_gr1(text)
        v = e_core_gr1(g, spec)
        if v.answer:
            w = v.witness
            if spec.premises and not any(u in sat_states(g, spec.premises[0]) for (u, _) in w.circulation):
                assert check_circulation(g, w)
            else:
                assert spec_checks(g, spec, w)
            assert verify_undominated(g, w.x)
            if w.exact:
                assert holds_on_lasso(g, spec, w.lasso)


# --- random games --------------------------------------------------------------

specs = st.sampled_from(["true -> true", "true -> GF p0", "true -> GF p1", "true -> GF p0 & GF p2",
                         "GF p1 -> GF p0", "true -> GF (p1 | p2)"])


@settings(max_examples=30)
@given(small_games(max_players=3, max_states=3))
def test_search_and_region_agree(g):
    a = core_nonempty(g)
    b = core_nonempty(g, method="region")
    assert a.answer == b.answer
    if a.answer:
        assert verify_nonempty_witness(g, a.witness)
        assert verify_nonempty_witness(g, b.witness)


@settings(max_examples=30)
@given(small_games(max_players=3, max_states=3), specs)
def test_random_e_core_witnesses(g, text):
    spec = parse_gr1(text)
    if not spec.atoms() <= g.propositions:
        return
    v = e_core_gr1(g, spec)
    if not v.answer:
        return
    w = v.witness
    assert check_circulation(g, w)
    assert verify_undominated(g, w.x)
    cyc = {u for (u, _) in w.circulation}
    prem = all(cyc & sat_states(g, b) for b in spec.premises)
    if prem:
        assert all(cyc & sat_states(g, b) for b in spec.guarantees)
    if w.exact:
        assert lasso_payoff(g, w.lasso) == w.x
        assert holds_on_lasso(g, spec, w.lasso)


@settings(max_examples=30)
@given(small_games(max_players=3, max_states=3), st.data())
def test_random_profiles_membership_vs_brute_force(g, data):
    acts = [g.actions[i][data.draw(st.integers(0, len(g.actions[i]) - 1))] for i in range(g.n)]
    p = constant_profile(g, acts)
    mine = membership(g, p)
    brute = brute_membership(g, p)
    if brute.answer == NO:
        assert not mine.answer
    if not mine.answer:
        assert verify_domination(g, g.init_index, compute_payoff(g, p), mine.witness)


def test_stay_at_s_is_in_balanced_core():
    g = three_sinks_balanced()
    assert membership(g, stay_at_s_profile(g)).answer
