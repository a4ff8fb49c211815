"""Sparse multivariate polynomials and rational functions over Q.

Both types are immutable value objects.  Univariate rational functions are
kept in lowest terms with a monic denominator; multivariate ones are not
reduced (no multivariate gcd) and compare by cross-multiplication.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

import sympy

Exps = tuple  # tuple[int, ...]


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    L = 1
    for v in values:
        L = L * v.denominator // math.gcd(L, v.denominator)
    return L


def grlex_key(e: Exps):
    """Sort key; ``sorted(..., key=grlex_key, reverse=True)`` lists the largest term first."""
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exps, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if c != 0:
                clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): Fraction(c)})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    # queries ---------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # evaluation ------------------------------------------------------------
    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point, computed over a common denominator."""
        if len(point) != self.nvars:
            raise ValueError("point has the wrong dimension")
        if not self.terms:
            return Fraction(0)
        pts = [Fraction(x) for x in point]
        maxdeg = [max(e[i] for e in self.terms) for i in range(self.nvars)]
        num_pows, den_pows = [], []
        for x, D in zip(pts, maxdeg):
            n, d = x.numerator, x.denominator
            np_ = [1] * (D + 1)
            dp = [1] * (D + 1)
            for k in range(1, D + 1):
                np_[k] = np_[k - 1] * n
                dp[k] = dp[k - 1] * d
            num_pows.append(np_)
            den_pows.append(dp)
        L = _lcm_denominators(self.terms.values())
        total = 0
        for e, c in self.terms.items():
            t = c.numerator * (L // c.denominator)
            for i, k in enumerate(e):
                if maxdeg[i]:
                    t *= num_pows[i][k] * den_pows[i][maxdeg[i] - k]
            total += t
        den = L
        for i, D in enumerate(maxdeg):
            den *= den_pows[i][D]
        return Fraction(total, den)

    def substitute(self, values: Sequence) -> "RatFunc | MultiPoly":
        """Compose with polynomials or rational functions (one per variable)."""
        if len(values) != self.nvars:
            raise ValueError("substitution needs one value per variable")
        if not values:
            return self
        if all(isinstance(v, MultiPoly) for v in values):
            nv = values[0].nvars
            out = MultiPoly(nv)
            cache: dict = {}
            for e, c in self.terms.items():
                t = MultiPoly.constant(c, nv)
                for i, k in enumerate(e):
                    if k:
                        key = (i, k)
                        if key not in cache:
                            cache[key] = values[i] ** k
                        t = t * cache[key]
                out = out + t
            return out
        rvals = [RatFunc.coerce(v) for v in values]
        nv = rvals[0].nvars
        out = RatFunc(MultiPoly(nv), MultiPoly.constant(1, nv))
        for e, c in self.terms.items():
            t = RatFunc(MultiPoly.constant(c, nv), MultiPoly.constant(1, nv))
            for i, k in enumerate(e):
                if k:
                    t = t * rvals[i] ** k
            out = out + t
        return out

    # formatting ------------------------------------------------------------
    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            a = abs(c)
            coef = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if not mono:
                body = coef
            elif a == 1:
                body = mono
            else:
                body = f"{coef}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.to_string()!r})"


# -- univariate helpers on coefficient lists (lowest degree first) -----------


def ucoeffs(p: MultiPoly) -> list[Fraction]:
    if p.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    deg = p.degree()
    out = [Fraction(0)] * (deg + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def from_ucoeffs(cs: Sequence) -> MultiPoly:
    return MultiPoly(1, {(k,): Fraction(c) for k, c in enumerate(cs) if c != 0})


def utrim(cs: Sequence) -> list[Fraction]:
    cs = [Fraction(c) for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def umul(a: Sequence, b: Sequence) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return utrim(out)


def uadd(a: Sequence, b: Sequence) -> list[Fraction]:
    n = max(len(a), len(b))
    return utrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def udivmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a, b = utrim(a), utrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = utrim(r)
    return utrim(q), r


def ugcd(a: Sequence, b: Sequence) -> list[Fraction]:
    """Monic gcd (``[]`` when both are zero)."""
    a, b = utrim(a), utrim(b)
    while b:
        a, b = b, udivmod(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]


def uevaluate(cs: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def nonnegative_integer_roots(cs: Sequence) -> list[int]:
    """Sorted nonnegative integer roots of a nonzero univariate polynomial."""
    cs = utrim(cs)
    if not cs:
        raise ValueError("the zero polynomial has every integer as a root")
    roots = []
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        roots.append(0)
    cs = cs[k:]
    if len(cs) == 1:
        return roots
    L = _lcm_denominators(cs)
    ints = [int(c * L) for c in cs]
    for d in sympy.divisors(abs(ints[0])):
        if uevaluate(ints, d) == 0:
            roots.append(int(d))
    return sorted(roots)


# -- rational functions -------------------------------------------------------


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(1, num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator disagree on variable count")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.nvars == 1:
            num, den = _reduce_univariate(num, den)
        elif den.is_constant():
            num, den = num.scale(1 / den.constant_value()), MultiPoly.constant(1, num.nvars)
        elif num.is_zero():
            den = MultiPoly.constant(1, num.nvars)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def coerce(cls, x, nvars: int | None = None) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return cls(x)
        if isinstance(x, (int, Fraction)):
            if nvars is None:
                raise ValueError("need a variable count to lift a constant")
            return cls(MultiPoly.constant(x, nvars))
        raise TypeError(f"cannot lift {x!r} to a rational function")

    def _lift(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            return RatFunc.coerce(other, self.nvars)
        if isinstance(other, RatFunc):
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("rational function powers must be integers")
        if k < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = RatFunc.coerce(other, self.nvars)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.nvars == other.nvars and self.num * other.den == other.num * self.den

    def __hash__(self):
        if self.nvars == 1 or self.den.is_constant():
            return hash((self.num, self.den))
        return hash(self.nvars)

    def evaluate_parts(self, point: Sequence) -> tuple[Fraction, Fraction]:
        return self.num.evaluate(point), self.den.evaluate(point)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def substitute(self, values: Sequence) -> "RatFunc":
        n = RatFunc.coerce(self.num.substitute(values))
        d = RatFunc.coerce(self.den.substitute(values))
        return n / d

    def to_string(self, names: Sequence[str] | None = None) -> str:
        n = self.num.to_string(names)
        if self.den == MultiPoly.constant(1, self.nvars):
            return n
        return f"({n})/({self.den.to_string(names)})"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"RatFunc({self.to_string()!r})"


def _reduce_univariate(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    n, d = ucoeffs(num), ucoeffs(den)
    if not utrim(n):
        return MultiPoly(1), MultiPoly.constant(1, 1)
    g = ugcd(n, d)
    if len(g) > 1:
        n = udivmod(n, g)[0]
        d = udivmod(d, g)[0]
    lead = utrim(d)[-1]
    return from_ucoeffs([c / lead for c in n]), from_ucoeffs([c / lead for c in d])


def all_monomials(nvars: int, max_degree: int) -> list[Exps]:
    """Exponent tuples of total degree at most ``max_degree``, largest grlex first."""
    exps = [e for e in product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    return sorted(exps, key=grlex_key, reverse=True)
