from __future__ import annotations

import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from orbitlab.errors import EmptySupport, NotFree, NotMember, ZeroGenerator
from orbitlab.exact import height_int
from orbitlab.multgroup import (
    build_group,
    contains,
    decompose,
    decompose_mod_torsion,
    height_lower_constant,
    is_member,
    radical_contains,
)


def brute_member(gens, x, bound=6):
    """Oracle: search small exponent vectors and both signs."""
    for ks in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        v = F(1)
        for g, k in zip(gens, ks):
            v *= F(g) ** k
        if v == x:
            return True
    return False


def test_build_group_examples():
    G = build_group([2])
    assert G.support.primes == (2,) and G.lattice_basis == ((1,),)
    G = build_group([2, 3])
    assert G.support.primes == (2, 3) and G.lattice_basis == ((1, 0), (0, 1))
    G = build_group([4, 6])
    assert G.lattice_basis == ((1, 1), (0, 2))  # same lattice as span{(2,0),(1,1)}
    with pytest.raises(ZeroGenerator):
        build_group([2, 0])


def test_contains_examples():
    assert contains(build_group([2]), 8).exponents == (3,)
    with pytest.raises(NotMember) as exc:
        contains(build_group([2]), 3)
    assert exc.value.reason == "support"
    w = contains(build_group([4, 6]), F(2, 3))
    assert w.exponents == (1, -1) and w.torsion == 1


def test_decompose_examples():
    assert decompose(build_group([2, 3]), 12).exponents == (2, 1)
    assert decompose(build_group([2, 4]), 8).exponents == (1, 1)
    with pytest.raises(NotMember) as exc:
        decompose(build_group([2]), -2)
    assert exc.value.reason == "sign"


def test_decompose_mod_torsion():
    w = decompose_mod_torsion(build_group([2, 3]), -6)
    assert w.exponents == (1, 1) and w.torsion == -1


def test_negative_generators_supply_sign():
    G = build_group([-2])
    assert decompose(G, -8).exponents == (3,)
    assert not is_member(G, -4)
    G = build_group([F(-3, 5)])
    assert decompose(G, F(-5, 3)).exponents == (-1,)


def test_completeness_grid():
    G = build_group([2, 3])
    for a in range(-15, 16):
        for b in range(-15, 16):
            for s in (1, -1):
                x = s * F(2) ** a * F(3) ** b
                if s == 1:
                    w = contains(G, x)
                    assert w.evaluate(G.generators) == x
                else:
                    assert not is_member(G, x)
    for x in (5, 7, F(10, 7)):
        assert not is_member(G, x)


@given(st.lists(st.sampled_from([2, 3, 4, 6, 12, F(1, 2), F(2, 3), -2, -3, F(9, 4)]),
                min_size=1, max_size=3),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.sampled_from([1, -1]))
def test_soundness_and_canonical(gens, ks, sign):
    G = build_group(gens)
    x = sign * G.element(ks[: len(gens)])
    try:
        w = decompose(G, x)
    except NotMember:
        assert not brute_member(gens, x, bound=8)
        return
    assert w.evaluate(G.generators) == x
    assert decompose(G, x) == w
    # any other representation reduces to the same canonical vector
    if G.relations:
        shifted = G.element([k + r for k, r in zip(w.exponents, G.relations[0])])
        assert decompose(G, shifted) == w


def test_radical_examples():
    r = radical_contains(build_group([4]), 2)
    assert r.power == 2 and r.witness.exponents == (1,)
    r = radical_contains(build_group([2]), -2)
    assert r.power == 2 and r.witness.exponents == (2,)
    with pytest.raises(NotMember):
        radical_contains(build_group([2]), 3)


@pytest.mark.parametrize("x", [2, -2, F(3, 2), 6, F(1, 8), 3, 5, -1])
def test_radical_idempotence(x):
    G = build_group([4, 18])
    def ok(y):
        try:
            radical_contains(G, y)
            return True
        except NotMember:
            return False
    base = ok(F(x))
    for t in range(1, 5):
        assert ok(F(x) ** t) == base


def test_radical_power_is_least():
    G = build_group([8, 9])
    r = radical_contains(G, 6)
    assert r.power == 6
    for m in range(1, 6):
        assert not is_member(G, F(6) ** m)


def test_height_constant_examples():
    for gens in ([2], [2, 3], [4, 6]):
        C = height_lower_constant(build_group(gens))
        assert C.factor == F(1, 2)
    with pytest.raises(NotFree):
        height_lower_constant(build_group([2, 4]))
    with pytest.raises(EmptySupport):
        height_lower_constant(build_group([-1]))


@pytest.mark.parametrize("gens", [[2, 3], [4, 6], [F(2, 3), 5], [12, 18, 5]])
def test_height_constant_enumeration(gens):
    G = build_group(gens)
    C = height_lower_constant(G)
    R = 6 if len(gens) == 3 else 20
    for ks in itertools.product(range(-R, R + 1), repeat=len(gens)):
        a = G.element(ks)
        assert C.holds(a, ks)
        assert C.holds(-a, ks)
        K = max(abs(k) for k in ks)
        assert math.log(height_int(a)) >= C.value * K - 1e-9
