"""Exact rationals, prime valuations, S-unit factorization and Weil heights over Q.

Rationals are plain :class:`fractions.Fraction` values; Fraction already keeps
numerator and denominator coprime with a positive denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

import sympy

from .errors import NotSUnit, ZeroInput

RationalLike = Union[int, str, Fraction]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction. Strings use the ``"num/den"`` form."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return as_rational(text)


def is_prime(n: int) -> bool:
    return n >= 2 and bool(sympy.isprime(n))


def prime_support(x: RationalLike) -> tuple[int, ...]:
    """All primes dividing the numerator or denominator of ``x``."""
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("0 has no prime support")
    primes = set(sympy.factorint(abs(x.numerator))) | set(sympy.factorint(x.denominator))
    return tuple(sorted(primes))


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        for a, b in zip(ps, ps[1:]):
            if a >= b:
                raise ValueError("primes must be strictly increasing")
        for p in ps:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(tuple(sorted(set(int(p) for p in primes))))

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def union(self, other: Iterable[int]) -> "PrimeSet":
        return PrimeSet.of(set(self.primes) | set(other))


@dataclass(frozen=True)
class ValVector:
    """Sign and prime exponents of an S-unit.

    ``exponents`` is stored as a sorted tuple of ``(prime, exponent)`` pairs
    with no zero exponents, so instances hash and compare structurally.
    """

    sign: int
    exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        items = self.exponents
        if isinstance(items, Mapping):
            items = items.items()
        cleaned = tuple(sorted((int(p), int(e)) for p, e in items if e != 0))
        object.__setattr__(self, "exponents", cleaned)

    def __getitem__(self, p: int) -> int:
        return dict(self.exponents).get(p, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)

    def value(self) -> Fraction:
        num, den = 1, 1
        for p, e in self.exponents:
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(self.sign * num, den)

    def to_json(self) -> dict:
        return {"sign": self.sign, "exponents": {str(p): e for p, e in self.exponents}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ValVector":
        return cls(int(obj["sign"]), {int(p): int(e) for p, e in obj["exponents"].items()})


def _strip(n: int, p: int) -> tuple[int, int]:
    """``(e, m)`` with ``n = p**e * m`` and ``p`` not dividing ``m`` (``n > 0``)."""
    if p == 2:
        e = (n & -n).bit_length() - 1
        return e, n >> e
    if n % p:
        return 0, n
    # divide by p, p^2, p^4, ... while possible, then walk back down
    powers = [p]
    while n % (powers[-1] * powers[-1]) == 0:
        powers.append(powers[-1] * powers[-1])
    e = 0
    for k in range(len(powers) - 1, -1, -1):
        if n % powers[k] == 0:
            n //= powers[k]
            e += 1 << k
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def valuation(p: int, x: RationalLike) -> int:
    """The p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("valuation of 0 is undefined")
    e_num, _ = _strip(abs(x.numerator), p)
    if e_num:
        return e_num
    e_den, _ = _strip(x.denominator, p)
    return -e_den


def sunit_factor(S: PrimeSet | Iterable[int], x: RationalLike) -> ValVector:
    """Factor ``x`` over ``S`` by trial division; raise NotSUnit otherwise."""
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("0 is not an S-unit")
    num, den = abs(x.numerator), x.denominator
    exps = {}
    for p in S:
        a, num = _strip(num, p)
        b, den = _strip(den, p)
        if a - b:
            exps[p] = a - b
    if num != 1 or den != 1:
        raise NotSUnit(num * den)
    return ValVector(1 if x > 0 else -1, exps)


class Height(NamedTuple):
    """Weil height of a rational: ``exact = max(|num|, den)``, ``log = log(exact)``."""

    exact: int
    log: float


def height_int(x: RationalLike) -> int:
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("height of 0 is not defined")
    return max(abs(x.numerator), x.denominator)


def weil_height(x: RationalLike) -> Height:
    H = height_int(x)
    return Height(H, math.log(H))
