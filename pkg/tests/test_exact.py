from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from orbitlab.errors import NotSUnit, ZeroInput
from orbitlab.exact import (
    PrimeSet,
    ValVector,
    as_rational,
    format_rational,
    height_int,
    parse_rational,
    sunit_factor,
    valuation,
    weil_height,
)

nonzero = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


def test_valuation_examples():
    assert valuation(2, 12) == 2
    assert valuation(3, F(5, 9)) == -2
    assert valuation(7, 10) == 0
    with pytest.raises(ZeroInput):
        valuation(2, 0)


def test_sunit_factor_examples():
    v = sunit_factor(PrimeSet.of([2, 3]), -12)
    assert v.sign == -1 and v.as_dict() == {2: 2, 3: 1}
    one = sunit_factor(PrimeSet.of([2, 3]), 1)
    assert one.sign == 1 and one.as_dict() == {}
    with pytest.raises(NotSUnit) as exc:
        sunit_factor(PrimeSet.of([2, 3]), 10)
    assert exc.value.cofactor == 5


def test_weil_height_examples():
    assert weil_height(2).log == pytest.approx(math.log(2))
    assert weil_height(F(2, 3)).exact == 3
    assert weil_height(1).log == 0
    with pytest.raises(ZeroInput):
        weil_height(0)


def test_rational_text_round_trip():
    assert format_rational(F(-3, 5)) == "-3/5"
    assert format_rational(F(4)) == "4"
    assert parse_rational("6/4") == F(3, 2)
    assert as_rational("-7") == -7


def test_primeset_validation():
    with pytest.raises(ValueError):
        PrimeSet((3, 2))
    with pytest.raises(ValueError):
        PrimeSet((4,))
    assert 3 in PrimeSet.of([3, 2, 3])


@given(nonzero)
def test_valvector_reconstructs(x):
    S = PrimeSet.of(p for p in range(2, 60) if all(p % q for q in range(2, p)))
    try:
        v = sunit_factor(S, x)
    except NotSUnit:
        return
    assert v.value() == x
    assert ValVector.from_json(v.to_json()) == v


@given(nonzero, nonzero)
def test_valuation_is_additive(a, b):
    for p in (2, 3, 5):
        assert valuation(p, a * b) == valuation(p, a) + valuation(p, b)


@given(nonzero, nonzero)
def test_height_submultiplicative(a, b):
    assert height_int(a * b) <= height_int(a) * height_int(b)


@given(nonzero)
def test_height_of_inverse(a):
    assert height_int(a) == height_int(1 / a) == max(abs(a.numerator), a.denominator)


def test_height_valuation_inequality_enumeration():
    logs = {p: math.log(p) for p in (2, 3, 5)}
    for a in range(-10, 11):
        for b in range(-10, 11):
            for c in range(-10, 11):
                x = F(2) ** a * F(3) ** b * F(5) ** c
                rhs = 0.5 * (abs(a) * logs[2] + abs(b) * logs[3] + abs(c) * logs[5])
                h = weil_height(x).log
                assert h >= rhs - 1e-9
                assert weil_height(-x).exact == weil_height(x).exact
