"""P-recursive and C-finite sequences.

A :class:`PRecurrence` of order ``d`` reads ``a_{n+1} = sum_{i=0..d} r_i(n) a_{n-i}``
and carries the initial window ``a_p .. a_{p+d}``; the first computed term is
``a_{p+d+1}``.  A :class:`CFiniteRecurrence` of order ``d`` reads
``a_{n+d} = c_1 a_{n+d-1} + ... + c_d a_n`` with initial terms ``a_0 .. a_{d-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .dynamics import RationalSelfMap
from .errors import BadResidue, DegenerateODE, NotAnnihilating, PoleHit
from .exact import RationalLike, as_rational, format_rational
from .lattice import identity, matmul, nullspace, solve_rational
from .poly import (
    MultiPoly,
    RatFunc,
    from_ucoeffs,
    nonnegative_integer_roots,
    ucoeffs,
    udivmod,
    ugcd,
    umul,
    utrim,
)


def _univariate(r) -> RatFunc:
    if isinstance(r, (int, Fraction)):
        return RatFunc(MultiPoly.constant(r, 1))
    r = RatFunc.coerce(r)
    if r.nvars != 1:
        raise ValueError("recurrence coefficients must be univariate")
    return r


def _eval_univariate(r: RatFunc, n: int) -> Fraction:
    num, den = r.evaluate_parts((n,))
    if den == 0:
        raise PoleHit(f"coefficient {r} has a pole at n = {n}")
    return num / den


def minimal_shift(coeffs: Sequence[RatFunc]) -> int:
    """1 + the largest nonnegative integer pole of any coefficient (0 if none)."""
    worst = -1
    for r in coeffs:
        roots = nonnegative_integer_roots(ucoeffs(r.den))
        if roots:
            worst = max(worst, roots[-1])
    return worst + 1


@dataclass(frozen=True)
class PRecurrence:
    coeffs: tuple[RatFunc, ...]
    shift: int
    init: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(_univariate(r) for r in self.coeffs)
        init = tuple(as_rational(a) for a in self.init)
        if not coeffs:
            raise ValueError("a recurrence needs at least one coefficient")
        if len(init) != len(coeffs):
            raise ValueError(f"order {len(coeffs) - 1} needs {len(coeffs)} initial terms, got {len(init)}")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")
        if minimal_shift(coeffs) > self.shift:
            raise PoleHit(f"a coefficient has a pole at an integer >= {self.shift}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "init", init)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def with_minimal_shift(cls, coeffs, init) -> "PRecurrence":
        cs = tuple(_univariate(r) for r in coeffs)
        return cls(cs, minimal_shift(cs), tuple(init))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [r.to_string(["n"]) for r in self.coeffs],
            "shift": self.shift,
            "init": [format_rational(a) for a in self.init],
        }


@dataclass(frozen=True)
class CFiniteRecurrence:
    coeffs: tuple[Fraction, ...]
    init: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(as_rational(c) for c in self.coeffs)
        init = tuple(as_rational(a) for a in self.init)
        if len(init) != len(cs):
            raise ValueError("need exactly `order` initial terms")
        if cs and cs[-1] == 0:
            raise ValueError("last coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "init", init)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def terms(self, count: int) -> list[Fraction]:
        out = list(self.init[:count])
        d = self.order
        if d == 0:
            return [Fraction(0)] * count
        while len(out) < count:
            out.append(sum(c * out[-1 - i] for i, c in enumerate(self.coeffs)))
        return out

    def annihilates(self, terms: Sequence[RationalLike]) -> bool:
        ts = [as_rational(t) for t in terms]
        d = self.order
        return all(
            ts[n + d] == sum(c * ts[n + d - 1 - i] for i, c in enumerate(self.coeffs))
            for n in range(len(ts) - d)
        )

    def characteristic(self) -> list[Fraction]:
        """``x^d - c_1 x^{d-1} - ... - c_d``, leading coefficient first."""
        return [Fraction(1)] + [-c for c in self.coeffs]

    def primitive_polynomial(self) -> tuple[int, ...]:
        """The characteristic polynomial scaled to coprime integers with positive lead."""
        cs = self.characteristic()
        L = 1
        for c in cs:
            L = L * c.denominator // math.gcd(L, c.denominator)
        ints = [int(c * L) for c in cs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return tuple(v // g for v in ints)

    def to_precurrence(self) -> PRecurrence:
        if self.order == 0:
            return PRecurrence((RatFunc(MultiPoly(1)),), 0, (Fraction(0),))
        return PRecurrence(tuple(RatFunc(MultiPoly.constant(c, 1)) for c in self.coeffs), 0, self.init)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [format_rational(c) for c in self.coeffs],
            "init": [format_rational(a) for a in self.init],
        }


@dataclass(frozen=True)
class DFiniteODE:
    """``sum_i p_i(x) F^{(i)}(x) = 0`` with the series prefix ``a_0 .. a_k``."""

    poly_coeffs: tuple[MultiPoly, ...]
    init: tuple[Fraction, ...]

    def __post_init__(self):
        ps = [p if isinstance(p, MultiPoly) else MultiPoly.constant(p, 1) for p in self.poly_coeffs]
        while ps and ps[-1].is_zero():
            ps.pop()
        if not ps:
            raise DegenerateODE("all polynomial coefficients vanish")
        object.__setattr__(self, "poly_coeffs", tuple(ps))
        object.__setattr__(self, "init", tuple(as_rational(a) for a in self.init))

    @property
    def order(self) -> int:
        return len(self.poly_coeffs) - 1

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "poly_coeffs": [p.to_string(["x"]) for p in self.poly_coeffs],
            "init": [format_rational(a) for a in self.init],
        }


# -- ODE -> recurrence ------------------------------------------------------


def _falling(shift: int, i: int) -> list[Fraction]:
    """Coefficients of ``(m - shift)(m - shift - 1)...(m - shift - i + 1)`` in ``m``."""
    out = [Fraction(1)]
    for r in range(i):
        out = umul(out, [Fraction(-shift - r), Fraction(1)])
    return out


def _coefficient_relation(ode: DFiniteODE) -> dict[int, list[Fraction]]:
    """``Q_s(m)`` with ``sum_s Q_s(m) a_{m-s} = 0`` for every ``m >= 0``."""
    Q: dict[int, list[Fraction]] = {}
    for i, p in enumerate(ode.poly_coeffs):
        for (k,), c in p.terms.items():
            s = k - i
            term = [c * v for v in _falling(s, i)]
            prev = Q.get(s, [])
            n = max(len(prev), len(term))
            Q[s] = utrim([(prev[j] if j < len(prev) else 0) + (term[j] if j < len(term) else 0)
                          for j in range(n)])
    return {s: q for s, q in Q.items() if q}


def _shift_poly(cs: Sequence[Fraction], k: int) -> list[Fraction]:
    """Coefficients of ``q(n + k)``."""
    out: list[Fraction] = []
    power = [Fraction(1)]
    for c in cs:
        out = utrim([(out[j] if j < len(out) else 0) + (c * power[j] if j < len(power) else 0)
                     for j in range(max(len(out), len(power)))])
        power = umul(power, [Fraction(k), Fraction(1)])
    return out


def ode_to_recurrence(ode: DFiniteODE) -> PRecurrence:
    """The coefficient recurrence of the ODE, seeded from ``ode.init``."""
    Q = _coefficient_relation(ode)
    if not Q:
        raise DegenerateODE("the ODE induces the trivial relation")
    s_min, s_max = min(Q), max(Q)
    d = max(s_max - s_min - 1, 0)
    lead = _shift_poly(Q[s_min], s_min + 1)
    coeffs = []
    for i in range(d + 1):
        s = s_min + 1 + i
        q = _shift_poly(Q.get(s, []), s_min + 1)
        coeffs.append(RatFunc(from_ucoeffs([-c for c in q]), from_ucoeffs(lead)))
    roots = nonnegative_integer_roots(lead)
    p = max(roots[-1] + 1 if roots else 0, -s_min - 1 - d, 0)
    _check_initial(Q, ode.init)
    if len(ode.init) < p + d + 1:
        raise ValueError(f"the ODE needs initial coefficients a_0..a_{p + d}")
    return PRecurrence(tuple(coeffs), p, tuple(ode.init[p:p + d + 1]))


def _check_initial(Q: dict[int, list[Fraction]], init: Sequence[Fraction]) -> None:
    s_min = min(Q)
    for m in range(0, len(init) + s_min):
        total = Fraction(0)
        for s, q in Q.items():
            j = m - s
            if 0 <= j < len(init):
                total += sum(c * m**k for k, c in enumerate(q)) * init[j]
        if total != 0:
            raise ValueError(f"initial coefficients violate the ODE at x^{m}")


# -- expansion ----------------------------------------------------------------

Sequenceish = Union[PRecurrence, DFiniteODE, CFiniteRecurrence]


def expand(rec: Sequenceish, N: int) -> list[Fraction]:
    """Terms ``a_p .. a_{p+N}`` (``a_0 .. a_N`` for ODEs and C-finite recurrences)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if isinstance(rec, CFiniteRecurrence):
        return rec.terms(N + 1)
    if isinstance(rec, DFiniteODE):
        prec = ode_to_recurrence(rec)
        head = list(rec.init[: prec.shift])
        if N < prec.shift:
            return head[: N + 1]
        return head + expand(prec, N - prec.shift)
    d, p = rec.order, rec.shift
    out = list(rec.init[: N + 1])
    n = p + d
    while len(out) < N + 1:
        vals = [_eval_univariate(r, n) for r in rec.coeffs]
        out.append(sum(v * out[-1 - i] for i, v in enumerate(vals)))
        n += 1
    return out


# -- the dynamical encoding ---------------------------------------------------


class DynamicalEncoding(NamedTuple):
    map: RationalSelfMap
    observable: RatFunc
    start: tuple[Fraction, ...]
    shift: int


def _embed_univariate(p: MultiPoly, nvars: int) -> MultiPoly:
    return MultiPoly(nvars, {(k,) + (0,) * (nvars - 1): c for (k,), c in p.terms.items()})


def recurrence_to_dynsys(rec: PRecurrence) -> DynamicalEncoding:
    """Self-map of A^{d+2} whose first-term observable reproduces the sequence.

    State ``(t, t_1, ..., t_{d+1})`` holds the index ``t`` of ``t_1`` and the
    window ``a_t .. a_{t+d}``; one step appends
    ``sum_i r_i(t + d) t_{d+1-i}``.
    """
    d = rec.order
    nv = d + 2
    shifted = [r.substitute([RatFunc(from_ucoeffs([d, 1]))]) for r in rec.coeffs]
    L = [Fraction(1)]
    for r in shifted:
        dc = ucoeffs(r.den)
        L = udivmod(umul(L, dc), ugcd(L, dc))[0]
    num = MultiPoly(nv)
    for i, r in enumerate(shifted):
        factor = udivmod(L, ucoeffs(r.den))[0]
        coeff = _embed_univariate(from_ucoeffs(umul(ucoeffs(r.num), factor)), nv)
        num = num + coeff * MultiPoly.variable(d + 1 - i, nv)
    last = RatFunc(num, _embed_univariate(from_ucoeffs(L), nv))
    t = MultiPoly.variable(0, nv)
    coords = [RatFunc(t + 1)]
    coords += [RatFunc(MultiPoly.variable(j, nv)) for j in range(2, d + 2)]
    coords.append(last)
    start = (Fraction(rec.shift),) + rec.init
    return DynamicalEncoding(RationalSelfMap(tuple(coords)), RatFunc(MultiPoly.variable(1, nv)),
                             start, rec.shift)


# -- annihilators -------------------------------------------------------------


@dataclass(frozen=True)
class NoneFound:
    bound: int


def min_cfinite_annihilator(terms: Sequence[RationalLike], max_order: int | None = None
                            ) -> Union[CFiniteRecurrence, NoneFound]:
    """Lowest-order constant-coefficient recurrence satisfied by the whole segment."""
    ts = [as_rational(t) for t in terms]
    if len(ts) < 4:
        raise ValueError("need at least 4 terms")
    bound = len(ts) // 2 - 1 if max_order is None else max_order
    if all(t == 0 for t in ts):
        return CFiniteRecurrence((), ())
    for r in range(1, bound + 1):
        rows = [[ts[n + r - 1 - i] for i in range(r)] for n in range(len(ts) - r)]
        rhs = [ts[n + r] for n in range(len(ts) - r)]
        sol = solve_rational(rows, rhs, r)
        if sol is None:
            continue
        if sol[-1] == 0:
            fix = next((v for v in nullspace(rows, r) if v[-1] != 0), None)
            if fix is None:
                continue
            sol = [a + b for a, b in zip(sol, fix)]
        rec = CFiniteRecurrence(tuple(sol), tuple(ts[:r]))
        if rec.annihilates(ts):
            return rec
    return NoneFound(bound)


@dataclass(frozen=True)
class IntegerMonicRecurrence:
    """``a_{n+e} = c_1 a_{n+e-1} + ... + c_e a_n`` with integer ``c_i``."""

    coeffs: tuple[int, ...]
    init: tuple[Fraction, ...]


@dataclass(frozen=True)
class QuasilinearOnly:
    witness: tuple[int, ...]  # primitive annihilating polynomial, leading coefficient first


def fatou_normalize(rec: CFiniteRecurrence, terms: Sequence[RationalLike]
                    ) -> Union[IntegerMonicRecurrence, QuasilinearOnly]:
    ts = [as_rational(t) for t in terms]
    if not rec.annihilates(ts):
        raise NotAnnihilating("the recurrence does not annihilate the supplied terms")
    best = rec
    if len(ts) >= 4:
        found = min_cfinite_annihilator(ts, max_order=min(rec.order, len(ts) // 2 - 1))
        if isinstance(found, CFiniteRecurrence) and found.order <= rec.order:
            best = found
    prim = best.primitive_polynomial()
    if abs(prim[0]) != 1:
        return QuasilinearOnly(prim)
    lead = prim[0]
    return IntegerMonicRecurrence(tuple(-c * lead for c in prim[1:]), tuple(ts[: best.order]))


def _companion(rec: CFiniteRecurrence) -> list[list[Fraction]]:
    d = rec.order
    M = [[Fraction(int(j == i + 1)) for j in range(d)] for i in range(d - 1)]
    M.append([rec.coeffs[d - 1 - j] for j in range(d)])
    return M


def _kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def charpoly(M: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial ``det(xI - M)``, leading coefficient first (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    I = identity(n)
    c_prev = Fraction(1)
    for k in range(1, n + 1):
        Mk = matmul(M, Mk)
        Mk = [[Mk[i][j] + c_prev * I[i][j] for j in range(n)] for i in range(n)]
        AM = matmul(M, Mk)
        c_prev = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c_prev)
    return coeffs


def hadamard(A: CFiniteRecurrence, B: CFiniteRecurrence) -> CFiniteRecurrence:
    """Recurrence for the termwise product, from the Kronecker product of companions."""
    if A.order == 0 or B.order == 0:
        return CFiniteRecurrence((), ())
    K = _kron(_companion(A), _companion(B))
    cp = charpoly(K)
    d = len(K)
    ta, tb = A.terms(d), B.terms(d)
    return CFiniteRecurrence(tuple(-c for c in cp[1:]), tuple(x * y for x, y in zip(ta, tb)))


# -- sections -------------------------------------------------------------------


def section(terms: Sequence, L: int, j: int) -> list:
    """``(a_{Ln+j})_n``."""
    if L < 1 or not 0 <= j < L:
        raise BadResidue(f"residue {j} is not in [0, {L})")
    return list(terms[j::L])


def interleave(lists: Sequence[Sequence]) -> list:
    """Inverse of taking all sections: ``out[k] = lists[k % r][k // r]`` while defined."""
    r = len(lists)
    out = []
    k = 0
    while r and k // r < len(lists[k % r]):
        out.append(lists[k % r][k // r])
        k += 1
    return out
