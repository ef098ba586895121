import pytest
from hypothesis import given, settings, strategies as st

from mpcore.fixtures import two_robots
from mpcore.game import Lasso
from mpcore.gr1 import (And, Atom, Const, Gr1Spec, Not, Or, SpecSyntaxError, holds_on_lasso, holds_unrolled,
                        negate_gr1, parse_bool, parse_gr1, sat_states)


@pytest.mark.parametrize("text, m, n", [
    ("GF l & GF r -> GF l", 2, 1),
    ("true -> GF l & GF r", 0, 2),
    ("GF (a & !b) -> true", 1, 0),
    ("true -> true", 0, 0),
])
def test_parse_sizes(text, m, n):
    s = parse_gr1(text)
    assert (len(s.premises), len(s.guarantees)) == (m, n)


def test_parse_structure_and_round_trip():
    s = parse_gr1("GF ((a & !b) | c) -> GF d")
    assert s.premises == (Or(And(Atom("a"), Not(Atom("b"))), Atom("c")),)
    assert parse_gr1(str(s)) == s


@pytest.mark.parametrize("text, pos", [
    ("GF l ->", 7),
    ("GF (l & ) -> true", 8),
    ("GF l & -> GF r", 7),
    ("GF F l -> true", 3),
    ("GF l -> GF r $", 13),
    ("l -> GF r", 0),
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(SpecSyntaxError) as e:
        parse_gr1(text)
    assert e.value.pos == pos


def test_sat_states():
    g = two_robots()
    assert sat_states(g, Atom("l")) == {g.state_index["l"]}
    assert sat_states(g, Const(True)) == set(range(3))
    assert sat_states(g, parse_bool("l & r")) == set()
    with pytest.raises(ValueError, match="unknown propositions"):
        sat_states(g, Atom("nope"))


def test_negation_bundles():
    two = negate_gr1(parse_gr1("true -> GF l & GF r"))
    assert [(b.visit, b.avoid) for b in two] == [((), (Atom("l"),)), ((), (Atom("r"),))]
    one = negate_gr1(parse_gr1("GF m -> GF l"))
    assert [(b.visit, b.avoid) for b in one] == [((Atom("m"),), (Atom("l"),))]
    assert negate_gr1(parse_gr1("GF m -> true")) == []


atoms = st.sampled_from(["m", "l", "r"]).map(Atom)
bools = st.recursive(atoms | st.booleans().map(Const),
                     lambda sub: st.one_of(sub.map(Not), st.tuples(sub, sub).map(lambda t: And(*t)),
                                              st.tuples(sub, sub).map(lambda t: Or(*t))),
                     max_leaves=4)


@settings(max_examples=200)
@given(st.lists(bools, max_size=2), st.lists(bools, max_size=2),
       st.lists(st.integers(0, 2), max_size=3), st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_lasso_semantics_match_unrolled_word(prem, guar, stem, cycle):
    g = two_robots()
    spec = Gr1Spec(tuple(prem), tuple(guar))
    lasso = Lasso(tuple(stem), tuple(cycle))
    assert holds_on_lasso(g, spec, lasso) == holds_unrolled(g, spec, lasso)
    assert parse_gr1(str(spec)) == spec
