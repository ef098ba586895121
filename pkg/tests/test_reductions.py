import pytest
from hypothesis import given, settings, strategies as st

from mpcore.decisions import core_nonempty, dominated, exists_beneficial_deviation, membership
from mpcore.game import constant_profile, dump_game, game_to_dict, parse_game
from mpcore.oracle import NO, brute_membership
from mpcore.payoff import compute_payoff
from mpcore.reductions import (GADGET_WEIGHTS, Dfa, FormulaError, Qbf2Formula, dfa_bendev_expected,
                               dfa_intersection_nonempty, dump_dfas, enumerate_qbf2, enumerate_qbf3,
                               gen_dfa_bendev, gen_qsat2_dominated, gen_qsat3_nonemptiness, parse_dfas,
                               parse_formula, qbf_eval, sink_gadget)

from helpers import FIXTURES

PHI = (FIXTURES / "qsat2_example.qbf").read_text()
PSI = (FIXTURES / "qsat3_example.qbf").read_text()


def same_game(a, b):
    return game_to_dict(a) == game_to_dict(b) and a.table == b.table


def formula(*lines):
    return parse_formula("\n".join(lines) + "\n")


# --- formulas ------------------------------------------------------------------

def test_qbf_eval_examples():
    assert qbf_eval(parse_formula(PHI))
    assert not qbf_eval(formula("exists x", "forall y", "clause x y y"))
    assert qbf_eval(parse_formula(PSI))


def test_qbf_eval_size_cap():
    xs = tuple(f"x{i}" for i in range(9))
    ys = tuple(f"y{i}" for i in range(8))
    f = Qbf2Formula(xs, ys, ((("x0", True),) * 3,))
    with pytest.raises(FormulaError, match="exceed"):
        qbf_eval(f)


@pytest.mark.parametrize("text, msg", [
    ("exists x\nforall y\nclause x z\n", "undeclared"),
    ("exists x\nforall x\nclause x\n", "declared twice"),
    ("exists x\nforall y\n", "at least one clause"),
    ("exists x\nforall y\nclause x y x y\n", "between 1 and 3"),
    ("forall y\nclause y\n", "quantifier blocks"),
    ("exists x\nforall y\nclause x\nexists z\n", "quantifier after"),
    ("exists x\nforall y\nbogus x\n", "unknown directive"),
    ("exists x\nforall y\nclause -\n", "empty literal"),
])
def test_formula_errors(text, msg):
    with pytest.raises(FormulaError, match=msg):
        parse_formula(text)


def test_formula_text_round_trip():
    for text in (PHI, PSI):
        f = parse_formula(text)
        assert parse_formula(str(f)) == f


@pytest.mark.parametrize("p, q, count", [
    (0, 1, 2), (0, 2, 18), (1, 0, 2), (1, 1, 30), (1, 2, 252), (2, 0, 18), (2, 1, 252), (2, 2, 1096),
])
def test_enumeration_sizes(p, q, count):
    fs = list(enumerate_qbf2(p, q, 3))
    assert len(fs) == count
    assert len({f.clauses for f in fs}) == count


def test_enumerated_qbf3_are_well_formed():
    fs = list(enumerate_qbf3(1, 1, 1, 2))
    assert fs and all(len(f.clauses) <= 2 for f in fs)


# --- one alternation ------------------------------------------------------------

def test_qsat2_structure():
    f = parse_formula(PHI)
    g, s, x = gen_qsat2_dominated(f)
    q = len(f.ys)
    assert g.players == ("1", "2", "3", "4", "E", "A")
    assert s == "init" and x == (-1, -1, -1, -1, -1, 0)
    assert len(g.states) == 1 + 3 + 9 + 1
    assert {abs(v) for w in g.weights for v in w} <= {0, 1, 2 * q}
    assert g.weights[g.state_index["sink"]] == (-1,) * 5 + (0,)
    # first clause, third literal is y1: player 1 gains, player 2 pays
    assert g.weights[g.state_index["l1_3"]][:2] == (2 * q, -2 * q)
    assert same_game(parse_game(dump_game(g)), g)


@pytest.mark.parametrize("lines, truth", [
    (["exists x", "forall y", "clause x", "clause y"], True),
    (["exists x", "forall y", "clause x y y"], False),
])
def test_qsat2_small_instances(lines, truth):
    f = formula(*lines)
    assert qbf_eval(f) == truth
    g, s, x = gen_qsat2_dominated(f)
    assert dominated(g, s, x).answer == truth


def test_qsat2_illustration_is_dominated():
    g, s, x = gen_qsat2_dominated(parse_formula(PHI))
    assert dominated(g, s, x).answer


def test_qsat2_rejects_cnf():
    with pytest.raises(FormulaError):
        gen_qsat2_dominated(parse_formula(PSI))


# --- two alternations -----------------------------------------------------------

def test_qsat3_structure():
    f = parse_formula(PSI)
    g = gen_qsat3_nonemptiness(f)
    r = len(f.clauses)
    assert g.players == ("1", "2", "3", "4", "5", "6", "E", "A", "P", "Q", "R")
    assert {abs(v) for s in range(len(g.states)) if g.states[s].startswith("l")
            for v in g.weights[s]} <= {0, 3 * r}
    for name, w in GADGET_WEIGHTS.items():
        row = g.weights[g.state_index[name]]
        assert row[8:11] == w[:3] and row[6] == w[3]
    assert same_game(parse_game(dump_game(g)), g)


def test_qsat3_illustration_has_nonempty_core():
    assert core_nonempty(gen_qsat3_nonemptiness(parse_formula(PSI))).answer


def test_qsat3_unsatisfiable_matrix_gives_empty_core():
    f = formula("exists x1", "forall y1", "exists z1", "clause z1", "clause -z1")
    assert not qbf_eval(f)
    assert not core_nonempty(gen_qsat3_nonemptiness(f)).answer


def test_sink_gadget_core_is_empty():
    g = sink_gadget()
    assert not core_nonempty(g).answer
    assert not core_nonempty(g, method="region").answer


def test_sink_gadget_profiles_all_deviate():
    g = sink_gadget()
    for a in ("H", "T"):
        for b in ("H", "T"):
            for c in ("H", "T"):
                p = constant_profile(g, [a, b, c])
                assert brute_membership(g, p).answer == NO, (a, b, c)
                assert not membership(g, p).answer


# --- automata --------------------------------------------------------------------

def unary(states, succ, init, accept):
    return Dfa(tuple(states), ("a",), {(q, "a"): succ[q] for q in states}, init, frozenset(accept))


def word_dfa(alphabet, word):
    """Accepts exactly ``word``."""
    states = [f"q{i}" for i in range(len(word) + 1)] + ["dead"]
    delta = {}
    for i in range(len(word) + 1):
        for a in alphabet:
            delta[(f"q{i}", a)] = f"q{i + 1}" if i < len(word) and a == word[i] else "dead"
    delta.update({("dead", a): "dead" for a in alphabet})
    return Dfa(tuple(states), tuple(alphabet), delta, "q0", frozenset({f"q{len(word)}"}))


def test_intersection_examples():
    star = unary(["q"], {"q": "q"}, "q", ["q"])
    plus = unary(["q0", "q1"], {"q0": "q1", "q1": "q1"}, "q0", ["q1"])
    assert dfa_intersection_nonempty([star, plus])
    assert not dfa_intersection_nonempty([word_dfa("ab", "a"), word_dfa("ab", "b")])
    assert dfa_intersection_nonempty([word_dfa("ab", "ab")])
    empty = unary(["q"], {"q": "q"}, "q", [])
    assert not dfa_intersection_nonempty([empty])


def test_intersection_rejects_mixed_alphabets():
    with pytest.raises(FormulaError, match="alphabet"):
        dfa_intersection_nonempty([word_dfa("a", "a"), word_dfa("ab", "a")])


def test_partial_automaton_rejected():
    with pytest.raises(FormulaError, match="partial"):
        Dfa(("q",), ("a", "b"), {("q", "a"): "q"}, "q", frozenset({"q"}))
    with pytest.raises(FormulaError, match="partial"):
        parse_dfas("states q\nalphabet a b\ninit q\naccept q\nq a q\n")


def test_automata_text_round_trip():
    text = (FIXTURES / "dfa_even_odd.dfa").read_text()
    automata = parse_dfas(text)
    assert len(automata) == 2
    assert parse_dfas(dump_dfas(automata)) == automata


def test_single_accepting():
    a = word_dfa("ab", "a")
    assert a.single_accepting() is a
    two = Dfa(("p", "q"), ("a",), {("p", "a"): "q", ("q", "a"): "p"}, "p", frozenset({"p", "q"}))
    one = two.single_accepting()
    assert len(one.accept) == 1
    for word in (["#"], ["a", "#"], ["a", "a", "#", "a"]):
        assert one.accepts(word)
    assert not one.accepts(["a"])


def test_dfa_game_shape():
    automata = parse_dfas((FIXTURES / "dfa_even_odd.dfa").read_text())
    g, p = gen_dfa_bendev(automata)
    assert g.states == ("s0", "s1", "s2")
    assert g.weights == ((0, 0), (1, 1), (1, 1))
    assert g.actions[0] == ("e", "o", "d")
    for m, a in zip(p.machines, automata):
        assert m.act == tuple(range(len(a.states)))
    assert compute_payoff(g, p) == (0, 0)
    assert same_game(parse_game(dump_game(g)), g)


def test_disjoint_languages_give_a_deviation():
    automata = parse_dfas((FIXTURES / "dfa_even_odd.dfa").read_text())
    assert dfa_bendev_expected(automata)
    g, p = gen_dfa_bendev(automata)
    assert exists_beneficial_deviation(g, p).answer


def test_accepting_start_gives_no_deviation():
    both = [Dfa(("q",), ("s0",), {("q", "s0"): "q"}, "q", frozenset({"q"}))] * 2
    g, p = gen_dfa_bendev(both)
    assert compute_payoff(g, p) == (1, 1)
    assert not dfa_bendev_expected(both)
    assert not exists_beneficial_deviation(g, p).answer


def test_single_automaton_accepting_its_run():
    counter = Dfa(("a", "b", "c"), ("s0",), {("a", "s0"): "b", ("b", "s0"): "c", ("c", "s0"): "c"},
                  "a", frozenset({"c"}))
    g, p = gen_dfa_bendev([counter])
    assert compute_payoff(g, p) == (1,)
    assert not exists_beneficial_deviation(g, p).answer


@st.composite
def unary_families(draw):
    out = []
    for _ in range(draw(st.integers(1, 3))):
        k = draw(st.integers(1, 3))
        states = tuple(f"q{i}" for i in range(k))
        succ = {(q, "s0"): states[draw(st.integers(0, k - 1))] for q in states}
        accept = frozenset(draw(st.sets(st.sampled_from(states), max_size=k)))
        out.append(Dfa(states, ("s0",), succ, "q0", accept))
    return out


@settings(max_examples=60)
@given(unary_families())
def test_dfa_instances_match_intersection(automata):
    g, p = gen_dfa_bendev(automata)
    expected = dfa_bendev_expected(automata)
    assert expected == (not dfa_intersection_nonempty(automata))
    assert exists_beneficial_deviation(g, p).answer == expected
