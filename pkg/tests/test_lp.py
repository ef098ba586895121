from fractions import Fraction

from hypothesis import given, settings, strategies as st

from mpcore.geometry import Polyhedron, lp_solve
from mpcore.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPResult, check_certificate, solve_lp

from helpers import vertices

small = st.integers(-4, 4)


def test_maximize_with_upper_bound():
    r = lp_solve([1], Polyhedron.make(1, [([1], 2)]))
    assert r.status == OPTIMAL and r.value == 2 and r.point == (2,)


def test_infeasible():
    r = lp_solve(None, Polyhedron.make(1, [([1], 1), ([-1], -2)]))
    assert r.status == INFEASIBLE and not r.feasible


def test_unbounded():
    assert lp_solve([1], Polyhedron.make(1, [([-1], 0)])).status == UNBOUNDED


def test_margin_over_one_point_hull():
    # maximise t with z <= (2,1) and z >= (1,0) + t*(1,1); variables (z1, z2, t)
    rows = [([1, 0, 0], 2), ([0, 1, 0], 1), ([-1, 0, 1], -1), ([0, -1, 1], 0)]
    r = lp_solve([0, 0, 1], Polyhedron.make(3, rows))
    assert r.value == 1 and r.point == (2, 1, 1)


def test_equalities_and_certificate():
    c, A, b, Ae, be = [1, 1], [[1, 0]], [3], [[1, -1]], [Fraction(1, 2)]
    nonneg = [True, True]
    r = solve_lp(c, A, b, Ae, be, nonneg)
    assert r.value == Fraction(11, 2)
    assert check_certificate(c, A, b, Ae, be, nonneg, r)
    forged = LPResult(OPTIMAL, r.value + 1, r.point, r.dual)
    assert not check_certificate(c, A, b, Ae, be, nonneg, forged)


@st.composite
def boxed_lps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 4))
    c = [draw(small) for _ in range(n)]
    A = [[draw(small) for _ in range(n)] for _ in range(m)]
    b = [draw(st.integers(-6, 10)) for _ in range(m)]
    return c, A, b


@settings(max_examples=200)
@given(boxed_lps())
def test_optimum_matches_vertex_enumeration(lp):
    c, A, b = lp
    n = len(c)
    box = [([int(i == j) for j in range(n)], 5) for i in range(n)]
    box += [([-int(i == j) for j in range(n)], 0) for i in range(n)]
    poly = Polyhedron.make(n, list(zip(A, b)) + box)
    best = max((sum(ci * v for ci, v in zip(c, x)) for x in vertices(poly)), default=None)
    A_all = A + [r for r, _ in box[:n]]
    b_all = b + [5] * n
    r = solve_lp(c, A_all, b_all, nonneg=[True] * n)
    if best is None:
        assert r.status == INFEASIBLE
    else:
        assert r.status == OPTIMAL and r.value == best
        assert check_certificate(c, A_all, b_all, [], [], [True] * n, r)


@settings(max_examples=100)
@given(boxed_lps())
def test_free_variables_certificate(lp):
    c, A, b = lp
    n = len(c)
    # bound free variables on both sides so the optimum exists when feasible
    A2 = A + [[int(i == j) for j in range(n)] for i in range(n)] + [[-int(i == j) for j in range(n)] for i in range(n)]
    b2 = b + [3] * n + [3] * n
    r = solve_lp(c, A2, b2)
    if r.status == OPTIMAL:
        assert check_certificate(c, A2, b2, [], [], [False] * n, r)
    else:
        assert r.status == INFEASIBLE
        assert not vertices(Polyhedron.make(n, list(zip(A2, b2))))
