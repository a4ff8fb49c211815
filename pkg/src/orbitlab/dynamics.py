"""Rational self-maps of affine space over Q and their orbits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatch, Indeterminate, ZeroConstant
from .exact import RationalLike, as_rational, format_rational
from .lattice import rref
from .poly import MultiPoly, RatFunc, all_monomials

Point = tuple  # tuple[Fraction, ...]


class _Infinity:
    """The point at infinity of P^1(Q), used for observable values."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Extended = Union[Fraction, _Infinity]


def format_extended(v: Extended) -> str:
    return "inf" if v is INF else format_rational(v)


@dataclass(frozen=True)
class RationalSelfMap:
    coordinates: tuple[RatFunc, ...]

    def __post_init__(self):
        coords = tuple(RatFunc.coerce(c) for c in self.coordinates)
        for c in coords:
            if c.nvars != len(coords):
                raise DimensionMismatch(
                    f"coordinate in {c.nvars} variables for a map of dimension {len(coords)}"
                )
        object.__setattr__(self, "coordinates", coords)

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def __call__(self, point):
        return eval_map(self, point)

    def compose(self, inner: "RationalSelfMap") -> "RationalSelfMap":
        """``self o inner``."""
        return RationalSelfMap(tuple(c.substitute(inner.coordinates) for c in self.coordinates))

    def to_strings(self) -> list[str]:
        return [c.to_string() for c in self.coordinates]


def eval_map(phi: RationalSelfMap, x: Sequence[RationalLike]) -> Point:
    """Image of ``x``; raises Indeterminate(coordinate) when a denominator vanishes."""
    if len(x) != phi.dimension:
        raise DimensionMismatch(f"point of dimension {len(x)} for map of dimension {phi.dimension}")
    x = tuple(as_rational(v) for v in x)
    out = []
    for i, c in enumerate(phi.coordinates):
        d = c.den.evaluate(x)
        if d == 0:
            raise Indeterminate(i)
        out.append(c.num.evaluate(x) / d)
    return tuple(out)


# -- orbit records ------------------------------------------------------------


@dataclass(frozen=True)
class Completed:
    steps: int

    def to_json(self):
        return {"status": "completed", "steps": self.steps}


@dataclass(frozen=True)
class IndeterminateAt:
    step: int
    coordinate: Optional[int]  # None means the observable

    def to_json(self):
        return {"status": "indeterminate", "step": self.step,
                "coordinate": "observable" if self.coordinate is None else self.coordinate}


@dataclass(frozen=True)
class BudgetExceeded:
    step: int
    digits: int
    budget: int

    def to_json(self):
        return {"status": "budget_exceeded", "step": self.step,
                "digits": self.digits, "budget": self.budget}


Halt = Union[Completed, IndeterminateAt, BudgetExceeded]


@dataclass
class OrbitRecord:
    points: list
    halt: Halt
    values: Optional[list] = field(default=None)

    @property
    def completed(self) -> bool:
        return isinstance(self.halt, Completed)


def digit_size(point: Sequence[Fraction]) -> int:
    """Decimal digits of the largest numerator or denominator in ``point``."""
    bits = max((max(abs(v.numerator).bit_length(), v.denominator.bit_length()) for v in point),
               default=0)
    return math.ceil(bits * math.log10(2))


def orbit(phi: RationalSelfMap, x0: Sequence[RationalLike], N: int,
          budget: Optional[int] = None) -> OrbitRecord:
    """Points ``x0, phi(x0), ..., phi^N(x0)``, stopping early at indeterminacy or budget."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if len(x0) != phi.dimension:
        raise DimensionMismatch("start point has the wrong dimension")
    x = tuple(as_rational(v) for v in x0)
    points = [x]
    for k in range(N):
        if budget is not None:
            size = digit_size(x)
            if size > budget:
                return OrbitRecord(points, BudgetExceeded(k, size, budget))
        try:
            x = eval_map(phi, x)
        except Indeterminate as exc:
            return OrbitRecord(points, IndeterminateAt(k, exc.coordinate))
        points.append(x)
    if budget is not None:
        size = digit_size(x)
        if size > budget:
            return OrbitRecord(points, BudgetExceeded(N, size, budget))
    return OrbitRecord(points, Completed(N))


def eval_observable(f: RatFunc, point: Sequence[Fraction]) -> Extended:
    """``f(point)`` in P^1; raises Indeterminate(None) on 0/0."""
    num, den = f.evaluate_parts(point)
    if den == 0:
        if num == 0:
            raise Indeterminate(None)
        return INF
    return num / den


def orbit_sequence(phi: RationalSelfMap, f: RatFunc, x0: Sequence[RationalLike], N: int,
                   budget: Optional[int] = None) -> OrbitRecord:
    """Orbit plus observable values ``a_k = f(phi^k(x0))``."""
    f = RatFunc.coerce(f, phi.dimension)
    if f.nvars != phi.dimension:
        raise DimensionMismatch("observable has the wrong number of variables")
    rec = orbit(phi, x0, N, budget)
    values = []
    for k, p in enumerate(rec.points):
        try:
            values.append(eval_observable(f, p))
        except Indeterminate:
            return OrbitRecord(rec.points[:k], IndeterminateAt(k, None), values)
    rec.values = values
    return rec


# -- torus endomorphisms ------------------------------------------------------


def torus_map(constants: Sequence[RationalLike], A: Sequence[Sequence[int]]) -> RationalSelfMap:
    """The monomial map ``x_i -> c_i * prod_j x_j**A[i][j]``."""
    cs = [as_rational(c) for c in constants]
    d = len(cs)
    if len(A) != d or any(len(row) != d for row in A):
        raise DimensionMismatch("exponent matrix must be d x d")
    coords = []
    for i, (c, row) in enumerate(zip(cs, A)):
        if c == 0:
            raise ZeroConstant(f"constant {i} is zero")
        num = tuple(max(a, 0) for a in row)
        den = tuple(max(-a, 0) for a in row)
        coords.append(RatFunc(MultiPoly.monomial(num, c), MultiPoly.monomial(den, 1)))
    return RationalSelfMap(tuple(coords))


# -- degree-bounded vanishing ideals -----------------------------------------


def vanishing_ideal(points: Sequence[Sequence[RationalLike]], D: int) -> list[MultiPoly]:
    """Reduced echelon basis of polynomials of degree <= D vanishing on ``points``.

    Columns are ordered by descending graded-lex monomial, so each basis element
    has leading coefficient 1 on its largest monomial.
    """
    if not points:
        raise ValueError("need at least one point")
    if D < 1:
        raise ValueError("degree bound must be positive")
    pts = list(dict.fromkeys(tuple(as_rational(v) for v in p) for p in points))
    n = len(pts[0])
    monos = all_monomials(n, D)
    E = []
    for p in pts:
        row = []
        for e in monos:
            v = Fraction(1)
            for x, k in zip(p, e):
                if k:
                    v *= x**k
            row.append(v)
        E.append(row)
    R, piv = rref(E, len(monos))
    free = [c for c in range(len(monos)) if c not in piv]
    kernel = []
    for f in free:
        v = [Fraction(0)] * len(monos)
        v[f] = Fraction(1)
        for row, c in zip(R, piv):
            v[c] = -row[f]
        kernel.append(v)
    if not kernel:
        return []
    K, kp = rref(kernel, len(monos))
    return [MultiPoly(n, {monos[j]: c for j, c in enumerate(row)}) for row in K[: len(kp)]]
