from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from orbitlab.dynamics import (
    INF,
    BudgetExceeded,
    Completed,
    IndeterminateAt,
    RationalSelfMap,
    eval_map,
    orbit,
    orbit_sequence,
    torus_map,
    vanishing_ideal,
)
from orbitlab.errors import DimensionMismatch, Indeterminate, ZeroConstant
from orbitlab.lattice import rank
from orbitlab.multgroup import build_group, is_member
from orbitlab.parse import parse_expression, system_names
from orbitlab.poly import MultiPoly, RatFunc, all_monomials


def smap(*exprs):
    names = system_names(len(exprs))
    return RationalSelfMap(tuple(parse_expression(e, names) for e in exprs))


def obs(expr, dim):
    return parse_expression(expr, system_names(dim))


def test_eval_map_examples():
    assert eval_map(smap("x1+1"), [1]) == (2,)
    with pytest.raises(Indeterminate) as exc:
        eval_map(smap("1/x1"), [0])
    assert exc.value.coordinate == 0
    assert eval_map(smap("2*x1", "3*x1*x2"), [1, 1]) == (2, 3)
    with pytest.raises(DimensionMismatch):
        eval_map(smap("x1"), [1, 2])


def test_orbit_examples():
    r = orbit(smap("x1+1"), [1], 4)
    assert [p[0] for p in r.points] == [1, 2, 3, 4, 5] and r.halt == Completed(4)
    assert [p[0] for p in orbit(smap("x1^2"), [2], 3).points] == [2, 4, 16, 256]
    r = orbit(smap("1/(x1-2)"), [1], 3)
    assert [p[0] for p in r.points] == [1, -1, F(-1, 3), F(-3, 7)]


def test_orbit_stops_at_indeterminacy():
    r = orbit(smap("1/(x1-2)"), [F(5, 2)], 5)
    # 5/2 -> 2 -> pole
    assert isinstance(r.halt, IndeterminateAt) and r.halt.step == 1 and r.halt.coordinate == 0
    assert [p[0] for p in r.points] == [F(5, 2), 2]


def test_budget():
    r = orbit(smap("x1^2"), [2], 50, budget=1000)
    assert isinstance(r.halt, BudgetExceeded)
    assert r.halt.digits > 1000
    assert len(r.points) < 51


def test_orbit_sequence_examples():
    r = orbit_sequence(smap("x1+1"), obs("x1", 1), [1], 6)
    assert r.values == [1, 2, 3, 4, 5, 6, 7]
    r = orbit_sequence(smap("x1+1"), obs("1/(x1-3)", 1), [1], 3)
    assert r.values == [F(-1, 2), -1, INF, 1]
    r = orbit_sequence(smap("2*x1", "3*x1*x2"), obs("x1*x2", 2), [1, 1], 2)
    assert r.values == [1, 6, 72]


def test_observable_zero_over_zero():
    r = orbit_sequence(smap("x1+1"), obs("(x1-2)/(x1-2)", 1), [0], 4)
    # the fraction is reduced on parsing, so it is the constant 1
    assert r.values == [1] * 5
    # multivariate fractions are kept as given, so 0/0 is reachable
    u = MultiPoly.variable(0, 2) - 2
    f = RatFunc(u * MultiPoly.variable(1, 2), u)
    r = orbit_sequence(smap("x1+1", "x2"), f, [0, 5], 4)
    assert r.values == [5, 5] and isinstance(r.halt, IndeterminateAt)
    assert r.halt.step == 2 and r.halt.coordinate is None


def test_torus_map_examples():
    assert torus_map([2], [[1]]) == smap("2*x1")
    assert eval_map(torus_map([1, 1], [[0, 1], [1, 0]]), [3, 5]) == (5, 3)
    assert torus_map([2, 3], [[1, 0], [1, 1]]) == smap("2*x1", "3*x1*x2")
    phi = torus_map([F(1, 2), 3], [[1, -1], [2, 1]])
    assert eval_map(phi, [2, 4]) == (F(1, 4), 48)
    with pytest.raises(ZeroConstant):
        torus_map([0], [[1]])


@given(st.lists(st.sampled_from([2, 3, F(1, 2), F(2, 3), 6, -2]), min_size=2, max_size=2),
       st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.sampled_from([1, 2, 3, F(1, 3), 12]), min_size=2, max_size=2))
def test_torus_closure(cs, A, x0):
    G = build_group([2, 3, -1])
    rec = orbit(torus_map(cs, A), x0, 8, budget=2000)
    for p in rec.points:
        assert all(is_member(G, x) for x in p)


@given(st.integers(-5, 5), st.integers(1, 6))
def test_self_consistency_and_semigroup(x0, N):
    phi = smap("(x1^2+1)/(2*x1+3)")
    r = orbit(phi, [x0], 2 * N)
    for a, b in zip(r.points, r.points[1:]):
        assert eval_map(phi, a) == b
    r2 = orbit(phi.compose(phi), [x0], N)
    if r.completed and r2.completed:
        assert r2.points == r.points[::2]


def test_vanishing_ideal_examples():
    (b,) = vanishing_ideal([(F(2) ** k, F(4) ** k) for k in range(10)], 2)
    x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert b == x * x - y
    assert vanishing_ideal([(F(2) ** k, F(3) ** k) for k in range(21)], 2) == []
    basis = vanishing_ideal([(1, 1)], 1)
    assert set(basis) == {x - 1, y - 1}


def _span_rank(polys, monos):
    return rank([[p.terms.get(m, 0) for m in monos] for p in polys], len(monos)) if polys else 0


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3))
def test_vanishing_ideal_monotone(P, Q):
    monos = all_monomials(2, 2)
    bp = vanishing_ideal(P, 2)
    bpq = vanishing_ideal(P + Q, 2)
    for poly in bpq:
        assert all(poly.evaluate(pt) == 0 for pt in P + Q)
    assert _span_rank(bp + bpq, monos) == _span_rank(bp, monos)
    # dimension count: kernel of the evaluation matrix
    assert len(bp) == len(monos) - rank([[F(p[0]) ** e[0] * F(p[1]) ** e[1] for e in monos]
                                         for p in set(P)], len(monos))
