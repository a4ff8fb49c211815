"""Finitely generated subgroups of Q*.

A group is stored through its generators' valuation matrix ``V`` (rows are
primes of the support, columns are generators) together with a parity row for
the signs.  Membership is an integer linear system in ``Z^s + Z/2``; the sign
coordinate is handled by an extra slack column carrying the relation
``2 * sign = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptySupport, NotFree, NotMember, NotSUnit, ZeroGenerator
from .exact import (
    PrimeSet,
    RationalLike,
    as_rational,
    format_rational,
    height_int,
    prime_support,
    sunit_factor,
)
from .lattice import (
    hnf,
    integer_kernel,
    inverse,
    matvec,
    reduce_mod_hnf,
    rref,
    smith_normal_form,
    solve_integer,
    transpose,
)


@dataclass(frozen=True)
class ExponentWitness:
    exponents: tuple[int, ...]
    torsion: int = 1

    def evaluate(self, generators: Sequence[Fraction]) -> Fraction:
        out = Fraction(self.torsion)
        for g, k in zip(generators, self.exponents):
            out *= g**k
        return out

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "torsion": self.torsion}


@dataclass(frozen=True)
class MultSubgroup:
    generators: tuple[Fraction, ...]
    support: PrimeSet
    gen_matrix: tuple[tuple[int, ...], ...]
    sign_row: tuple[int, ...]
    lattice_basis: tuple[tuple[int, ...], ...]
    relations: tuple[tuple[int, ...], ...]
    _valuation_kernel: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def rank(self) -> int:
        return len(self.lattice_basis)

    @property
    def is_free(self) -> bool:
        return not self.relations

    def to_json(self) -> dict:
        return {"generators": [format_rational(g) for g in self.generators]}

    def element(self, exponents: Sequence[int], torsion: int = 1) -> Fraction:
        return ExponentWitness(tuple(exponents), torsion).evaluate(self.generators)


def build_group(generators: Iterable[RationalLike]) -> MultSubgroup:
    gens = tuple(as_rational(g) for g in generators)
    for i, g in enumerate(gens):
        if g == 0:
            raise ZeroGenerator(f"generator {i} is zero")
    primes: set[int] = set()
    for g in gens:
        primes.update(prime_support(g))
    support = PrimeSet.of(primes)
    vals = [sunit_factor(support, g) for g in gens]
    V = tuple(tuple(v[p] for v in vals) for p in support)
    sign_row = tuple(0 if v.sign > 0 else 1 for v in vals)
    m = len(gens)
    lattice_basis = tuple(tuple(r) for r in hnf(transpose(V, m), len(support))) if m else ()
    aug = _augmented(V, sign_row, m)
    full_kernel = integer_kernel(aug, m + 1)
    relations = tuple(tuple(r) for r in hnf([row[:m] for row in full_kernel], m)) if full_kernel else ()
    vkern = tuple(tuple(r) for r in integer_kernel([list(r) for r in V], m)) if V else tuple(
        tuple(int(i == j) for j in range(m)) for i in range(m)
    )
    return MultSubgroup(gens, support, V, sign_row, lattice_basis, relations, vkern)


def _augmented(V, sign_row, m) -> list[list[int]]:
    rows = [list(r) + [0] for r in V]
    rows.append(list(sign_row) + [2])
    return rows


def _valuation_target(G: MultSubgroup, x: Fraction) -> tuple[list[int], int]:
    try:
        vv = sunit_factor(G.support, x)
    except NotSUnit:
        raise NotMember("support", x) from None
    return [vv[p] for p in G.support], (0 if vv.sign > 0 else 1)


def _solve(G: MultSubgroup, x: Fraction, with_sign: bool) -> list[int]:
    if x == 0:
        raise NotMember("zero", x)
    target, sbit = _valuation_target(G, x)
    m = len(G.generators)
    if m == 0:
        if any(target) or (with_sign and sbit):
            raise NotMember("lattice" if any(target) else "sign", x)
        return []
    V = [list(r) for r in G.gen_matrix]
    if V:
        k = solve_integer(V, target, m)
        if k is None:
            raise NotMember("lattice", x)
    if not with_sign:
        return k if V else [0] * m
    sol = solve_integer(_augmented(V, G.sign_row, m), target + [sbit], m + 1)
    if sol is None:
        raise NotMember("sign", x)
    return sol[:m]


def contains(G: MultSubgroup, x: RationalLike) -> ExponentWitness:
    """A witness that ``x`` lies in ``G``; raises NotMember naming the failing constraint."""
    x = as_rational(x)
    k = _solve(G, x, with_sign=True)
    w = ExponentWitness(tuple(k), 1)
    assert w.evaluate(G.generators) == x
    return w


def is_member(G: MultSubgroup, x) -> bool:
    try:
        contains(G, x)
    except NotMember:
        return False
    return True


def decompose(G: MultSubgroup, x: RationalLike) -> ExponentWitness:
    """Canonical exponents: the solution reduced modulo the HNF of the relation lattice."""
    x = as_rational(x)
    k = _solve(G, x, with_sign=True)
    k = reduce_mod_hnf(k, G.relations)
    w = ExponentWitness(tuple(k), 1)
    assert w.evaluate(G.generators) == x
    return w


def decompose_mod_torsion(G: MultSubgroup, x: RationalLike) -> ExponentWitness:
    """Like :func:`decompose` but allows a leftover sign, recorded as torsion -1."""
    x = as_rational(x)
    try:
        return decompose(G, x)
    except NotMember as exc:
        if exc.reason != "sign":
            raise
    w = decompose(G, -x)
    return ExponentWitness(w.exponents, -1)


@dataclass(frozen=True)
class RadicalWitness:
    power: int
    witness: ExponentWitness


def radical_contains(G: MultSubgroup, x: RationalLike) -> RadicalWitness:
    """Least ``m >= 1`` with ``x**m`` in ``G``, plus a witness for ``x**m``."""
    x = as_rational(x)
    if x == 0:
        raise NotMember("zero", x)
    target, _ = _valuation_target(G, x)
    m0 = 1
    if G.gen_matrix:
        D, U, _ = smith_normal_form([list(r) for r in G.gen_matrix], len(G.generators))
        c = matvec(U, target)
        for i, ci in enumerate(c):
            d = D[i][i] if i < len(D[0]) else 0
            if d == 0:
                if ci:
                    raise NotMember("lattice", x)
                continue
            need = d // math.gcd(d, ci)
            m0 = m0 * need // math.gcd(m0, need)
    for m in (m0, 2 * m0):
        try:
            return RadicalWitness(m, decompose(G, x**m))
        except NotMember as exc:
            if exc.reason != "sign":
                raise
    raise AssertionError("an even power always clears the sign")


@dataclass(frozen=True)
class HeightConstant:
    """Lower-bound constant ``C = factor * log 2``.

    ``holds(a, k)`` checks ``h(a) >= C * max|k_i|`` exactly via
    ``H(a)**den >= 2**(num * max|k_i|)``.
    """

    factor: Fraction

    @property
    def value(self) -> float:
        return float(self.factor) * math.log(2)

    def holds(self, a: RationalLike, exponents: Sequence[int]) -> bool:
        K = max((abs(k) for k in exponents), default=0)
        H = height_int(a)
        return H ** self.factor.denominator >= 2 ** (self.factor.numerator * K)


def height_lower_constant(G: MultSubgroup) -> HeightConstant:
    if not G.support.primes:
        raise EmptySupport("all generators are +-1")
    m = len(G.generators)
    V = [list(r) for r in G.gen_matrix]
    if _has_valuation_relation(G):
        raise NotFree("generators are multiplicatively dependent modulo torsion")
    # pick m independent valuation rows and invert that square block
    _, piv = rref(transpose(V, m), len(V))
    rows = piv[:m]
    block = [V[r] for r in rows]
    Winv = inverse(block)
    norm = max(sum(abs(x) for x in row) for row in Winv)
    return HeightConstant(Fraction(1) / (2 * norm))


def _has_valuation_relation(G: MultSubgroup) -> bool:
    if G.relations:
        return True
    return bool(G._valuation_kernel)
