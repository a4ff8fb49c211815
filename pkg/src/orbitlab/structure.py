"""Detection and certification of structure in orbit sequences.

Membership sets and their arithmetic-progression decomposition, window
densities, multiplicative dependence among consecutive terms, exponent
trajectories with affine (torus) models, geometric forms, zero patterns, and
the rationality certificate for S-unit-valued recurrence sequences.

Every detector here works on a finite prefix.  Results describe what the
prefix shows; none of them is a proof about the infinite sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .dynamics import INF, Extended
from .errors import NotMember, NotSUnit, WindowTooLarge, ZeroOnTail
from .exact import PrimeSet, RationalLike, as_rational, format_rational, sunit_factor
from .holonomic import NoneFound, PRecurrence, expand
from .lattice import hnf, identity, integer_kernel, matvec, reduce_mod_hnf, solve_integer
from .multgroup import MultSubgroup, decompose_mod_torsion, is_member
from .poly import uadd, udivmod, ugcd, umul, utrim

DEFAULT_EPS = Fraction(1, 20)
DEFAULT_TAIL_FRACTION = Fraction(1, 2)
DEFAULT_LMAX = 24
LIST_CAP = 10_000


# -- membership sets ------------------------------------------------------------


@dataclass(frozen=True)
class MembershipSet:
    bits: tuple[bool, ...]
    zero_bits: tuple[bool, ...] = ()

    def __post_init__(self):
        zb = self.zero_bits or (False,) * len(self.bits)
        if len(zb) != len(self.bits):
            raise ValueError("bits and zero_bits differ in length")
        if any(a and b for a, b in zip(self.bits, zb)):
            raise ValueError("an index cannot be both a member and a zero")
        object.__setattr__(self, "zero_bits", tuple(zb))

    @classmethod
    def from_indices(cls, indices, n_max: int) -> "MembershipSet":
        s = set(indices)
        return cls(tuple(n in s for n in range(n_max + 1)))

    @property
    def n_max(self) -> int:
        return len(self.bits) - 1

    def members(self) -> list[int]:
        return [n for n, b in enumerate(self.bits) if b]

    def zeros(self) -> list[int]:
        return [n for n, b in enumerate(self.zero_bits) if b]

    def with_zeros(self) -> "MembershipSet":
        """The N_0 variant: members or zeros."""
        return MembershipSet(tuple(a or b for a, b in zip(self.bits, self.zero_bits)))

    def to_rle(self) -> list[list[int]]:
        """Runs of members as ``[start, length]`` pairs."""
        runs = []
        for n, b in enumerate(self.bits):
            if b:
                if runs and runs[-1][0] + runs[-1][1] == n:
                    runs[-1][1] += 1
                else:
                    runs.append([n, 1])
        return runs

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "count": sum(self.bits),
            "members_rle": self.to_rle(),
            "zeros": self.zeros(),
        }


def membership_set(values: Sequence[Extended], G: MultSubgroup) -> MembershipSet:
    bits, zeros = [], []
    for v in values:
        if v is INF:
            bits.append(False)
            zeros.append(False)
        elif v == 0:
            bits.append(False)
            zeros.append(True)
        else:
            bits.append(is_member(G, v))
            zeros.append(False)
    return MembershipSet(tuple(bits), tuple(zeros))


def banach_density(S: MembershipSet, w: int) -> Fraction:
    """Largest member fraction over all length-``w`` windows inside ``[0, n_max]``."""
    size = len(S.bits)
    if w < 1 or w > size:
        raise WindowTooLarge(f"window {w} does not fit in [0, {S.n_max}]")
    count = sum(S.bits[:w])
    best = count
    for start in range(1, size - w + 1):
        count += S.bits[start + w - 1] - S.bits[start - 1]
        best = max(best, count)
    return Fraction(best, w)


# -- arithmetic-progression decomposition --------------------------------------


@dataclass(frozen=True)
class ClassLabel:
    residue: int
    kind: str  # "full", "sparse" or "mixed"
    density: Fraction


@dataclass(frozen=True)
class APDecomposition:
    period: int
    labels: tuple[ClassLabel, ...]
    exceptional: tuple[int, ...]
    deficiencies: tuple[int, ...]
    n_max: int
    tail_start: int
    overflow: bool = False

    def full_residues(self) -> list[int]:
        return [c.residue for c in self.labels if c.kind == "full"]

    def reconstruct(self) -> MembershipSet:
        full = set(self.full_residues())
        exc, dfc = set(self.exceptional), set(self.deficiencies)
        return MembershipSet(tuple(
            ((n % self.period) in full and n not in dfc) or n in exc for n in range(self.n_max + 1)
        ))

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "labels": [{"residue": c.residue, "kind": c.kind, "density": format_rational(c.density)}
                       for c in self.labels],
            "exceptional": list(self.exceptional),
            "deficiencies": list(self.deficiencies),
            "tail_start": self.tail_start,
            "overflow": self.overflow,
        }


def _label_classes(S: MembershipSet, L: int, eps: Fraction, tail_start: int) -> list[ClassLabel]:
    labels = []
    for j in range(L):
        first = tail_start + ((j - tail_start) % L)
        idx = range(first, S.n_max + 1, L)
        if len(idx) == 0:
            density = Fraction(0)
        else:
            density = Fraction(sum(S.bits[n] for n in idx), len(idx))
        if density >= 1 - eps:
            kind = "full"
        elif density <= eps:
            kind = "sparse"
        else:
            kind = "mixed"
        labels.append(ClassLabel(j, kind, density))
    return labels


def ap_decompose(S: MembershipSet, L_max: int = DEFAULT_LMAX, eps=DEFAULT_EPS,
                 tail_fraction=DEFAULT_TAIL_FRACTION) -> APDecomposition:
    """Smallest period whose residue classes are all nearly full or nearly empty on the tail."""
    eps, tail_fraction = Fraction(eps), Fraction(tail_fraction)
    if L_max < 1 or not 0 < eps < Fraction(1, 2):
        raise ValueError("need L_max >= 1 and 0 < eps < 1/2")
    tail_start = math.ceil(tail_fraction * S.n_max)
    tail_len = S.n_max - tail_start + 1
    best = None
    for L in range(1, L_max + 1):
        labels = _label_classes(S, L, eps, tail_start)
        mixed = sum(len(range(tail_start + ((c.residue - tail_start) % L), S.n_max + 1, L))
                    for c in labels if c.kind == "mixed")
        mass = Fraction(mixed, tail_len)
        if best is None or mass < best[0]:
            best = (mass, L, labels)
        if mixed == 0:
            break
    _, L, labels = best
    full = {c.residue for c in labels if c.kind == "full"}
    exceptional = [n for n, b in enumerate(S.bits) if b and n % L not in full]
    deficiencies = [n for n, b in enumerate(S.bits) if not b and n % L in full]
    overflow = len(exceptional) > LIST_CAP or len(deficiencies) > LIST_CAP
    out = APDecomposition(L, tuple(labels), tuple(exceptional[:LIST_CAP]),
                          tuple(deficiencies[:LIST_CAP]), S.n_max, tail_start, overflow)
    if not overflow:
        assert out.reconstruct().bits == S.bits
    return out


# -- multiplicative dependence ----------------------------------------------------


@dataclass(frozen=True)
class DependenceRelation:
    exponents: tuple[int, ...]
    constant: Fraction
    window: int

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "constant": format_rational(self.constant),
                "window": self.window}


def _window_products(values: Sequence[Fraction], exps: Sequence[int]) -> list[Fraction]:
    w = len(exps)
    out = []
    for n in range(len(values) - w + 1):
        p = Fraction(1)
        for j, e in enumerate(exps):
            if e:
                p *= values[n + j] ** e
        out.append(p)
    return out


def relation_holds(values: Sequence[Fraction], exps: Sequence[int]) -> bool:
    prods = _window_products(values, exps)
    return all(p == prods[0] for p in prods)


def _as_sunits(values, S):
    out = []
    for i, v in enumerate(values):
        try:
            out.append(sunit_factor(S, v))
        except NotSUnit as exc:
            raise NotSUnit(exc.cofactor, index=i) from None
    return out


def dependence_lattice(values: Sequence[RationalLike], window: int,
                       S: PrimeSet | Sequence[int]) -> list[list[int]]:
    """Basis of all ``i`` making ``prod_j u_{n+j}^{i_j}`` independent of ``n``.

    Rows are in Hermite normal form with respect to the reversed coordinate
    order, so the first basis vector has a positive coefficient on the latest
    term it involves.
    """
    vals = [as_rational(v) for v in values]
    w = window
    if w < 1:
        raise ValueError("window must be positive")
    if len(vals) < w + 2:
        raise ValueError("need at least window + 2 values")
    vv = _as_sunits(vals, S)
    primes = list(S)
    val_rows, sign_rows = set(), set()
    for n in range(len(vals) - w):
        for p in primes:
            row = tuple(vv[n + j][p] - vv[n + j + 1][p] for j in range(w))
            if any(row):
                val_rows.add(row)
        srow = tuple(((vv[n + j].sign < 0) - (vv[n + j + 1].sign < 0)) % 2 for j in range(w))
        if any(srow):
            sign_rows.add(srow)
    val_rows, sign_rows = sorted(val_rows), sorted(sign_rows)
    k = len(sign_rows)
    A = [list(r) + [0] * k for r in val_rows]
    for i, r in enumerate(sign_rows):
        A.append(list(r) + [2 * int(i == t) for t in range(k)])
    kern = integer_kernel(A, w + k) if A else identity(w)
    basis = [row[:w] for row in kern]
    if not basis:
        return []
    rev = hnf([list(reversed(r)) for r in basis], w)
    return [list(reversed(r)) for r in rev]


def find_dependence(values: Sequence[RationalLike], window: int, S: PrimeSet | Sequence[int]
                    ) -> Union[DependenceRelation, NoneFound]:
    """First relation of the dependence lattice, preferring exponent sum zero.

    Relations with exponent sum zero survive rescaling the sequence by a
    constant, so they are tried first (in reversed-coordinate HNF order);
    the remaining basis vectors follow.
    """
    vals = [as_rational(v) for v in values]
    basis = dependence_lattice(vals, window, S)
    for v in _sum_zero_first(basis, window):
        g = 0
        for x in v:
            g = math.gcd(g, x)
        for cand in ([x // g for x in v], v):
            prods = _window_products(vals, cand)
            if all(p == prods[0] for p in prods):
                return DependenceRelation(tuple(cand), prods[0], window)
    return NoneFound(window)


def _sum_zero_first(basis: list[list[int]], w: int) -> list[list[int]]:
    if not basis:
        return []
    sums = [[sum(b) for b in basis]]
    coeffs = integer_kernel(sums, len(basis))
    sub = [[sum(c * b[j] for c, b in zip(row, basis)) for j in range(w)] for row in coeffs]
    sub = [list(reversed(r)) for r in hnf([list(reversed(r)) for r in sub], w)] if sub else []
    return sub + [b for b in basis if b not in sub]


# -- exponent trajectories and affine / torus models ------------------------------


@dataclass(frozen=True)
class ExponentTrajectory:
    rows: tuple[tuple[int, ...], ...]
    torsion: tuple[int, ...]

    def column(self, i: int) -> list[int]:
        return [r[i] for r in self.rows]


def exponent_trajectories(values: Sequence[Extended], G: MultSubgroup) -> ExponentTrajectory:
    """Canonical exponents of each value in ``G``; a leftover sign goes to the torsion track."""
    rows, tors = [], []
    for i, v in enumerate(values):
        if v is INF:
            raise NotMember("infinite", v, index=i)
        try:
            w = decompose_mod_torsion(G, v)
        except NotMember as exc:
            raise NotMember(exc.reason, v, index=i) from None
        rows.append(w.exponents)
        tors.append(w.torsion)
    return ExponentTrajectory(tuple(rows), tuple(tors))


@dataclass(frozen=True)
class AffineFit:
    A: tuple[tuple[int, ...], ...]
    p: tuple[int, ...]


@dataclass(frozen=True)
class NoFit:
    reason: str


def fit_affine_exponent_model(rows: Sequence[Sequence[int]]) -> Union[AffineFit, NoFit]:
    """Exact integer ``(A, p)`` with ``v(n+1) = A v(n) + p`` on every consecutive pair.

    When the data leave ``A`` underdetermined, each row of ``[A | p]`` is the
    representative closest to the matching row of ``[I | 0]`` modulo the
    integer kernel (centred Hermite reduction), so pure translations come out
    as ``A = I``.
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return NoFit("no data")
    e = len(rows[0])
    if len(rows) < e + 2:
        raise ValueError("need at least dimension + 2 rows")
    M = [r + [1] for r in rows[:-1]]
    kern = integer_kernel(M, e + 1)
    A, p = [], []
    for i in range(e):
        b = [r[i] for r in rows[1:]]
        x = solve_integer(M, b, e + 1)
        if x is None:
            return NoFit(f"no integer solution for coordinate {i}")
        base = [int(j == i) for j in range(e)] + [0]
        x = [a - c for a, c in zip(x, base)]
        x = reduce_mod_hnf(x, kern, centered=True)
        x = [a + c for a, c in zip(x, base)]
        A.append(tuple(x[:e]))
        p.append(x[e])
    for n in range(len(rows) - 1):
        if [a + b for a, b in zip(matvec(A, rows[n]), p)] != rows[n + 1]:
            return NoFit(f"verification failed at row {n}")
    return AffineFit(tuple(A), tuple(p))


@dataclass(frozen=True)
class TorusModel:
    """Exponent-level torus model.

    ``v(n+1) = A v(n) + p``, ``v(0) = v0``; the value at step ``n`` is
    ``C * (-1)**(sign . v(n)) * prod_i g_i**((Q v(n))_i)``.
    """

    A: tuple[tuple[int, ...], ...]
    p: tuple[int, ...]
    v0: tuple[int, ...]
    Q: tuple[tuple[int, ...], ...]
    C: Fraction
    generators: tuple[Fraction, ...]
    sign: tuple[int, ...]
    word_length: Optional[int] = None

    @property
    def dimension(self) -> int:
        return len(self.v0)

    def states(self, N: int):
        v = list(self.v0)
        for _ in range(N + 1):
            yield v
            v = [a + b for a, b in zip(matvec(self.A, v), self.p)]

    def value_at(self, v: Sequence[int]) -> Fraction:
        out = self.C
        if sum(s * x for s, x in zip(self.sign, v)) % 2:
            out = -out
        for g, k in zip(self.generators, matvec(self.Q, v)):
            if k:
                out *= g**k
        return out

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "A": [list(r) for r in self.A],
            "p": list(self.p),
            "v0": list(self.v0),
            "Q": [list(r) for r in self.Q],
            "C": format_rational(self.C),
            "generators": [format_rational(g) for g in self.generators],
            "sign": list(self.sign),
            "word_length": self.word_length,
        }


def build_torus_model(A, p, v0, Q=None, C=1, G: MultSubgroup | Sequence = (), sign=None,
                      word_length=None) -> TorusModel:
    from .errors import DimensionMismatch

    gens = tuple(G.generators) if isinstance(G, MultSubgroup) else tuple(as_rational(g) for g in G)
    e = len(v0)
    if len(A) != e or any(len(r) != e for r in A) or len(p) != e:
        raise DimensionMismatch("A must be e x e and p must have length e")
    if Q is None:
        Q = [[int(i == j) for j in range(e)] for i in range(len(gens))]
    if len(Q) != len(gens) or any(len(r) != e for r in Q):
        raise DimensionMismatch("Q must be (number of generators) x e")
    sign = tuple(sign) if sign is not None else (0,) * e
    if len(sign) != e:
        raise DimensionMismatch("sign functional must have length e")
    return TorusModel(tuple(tuple(map(int, r)) for r in A), tuple(map(int, p)),
                      tuple(map(int, v0)), tuple(tuple(map(int, r)) for r in Q),
                      as_rational(C), gens, sign, word_length)


@dataclass(frozen=True)
class Verified:
    horizon: int


@dataclass(frozen=True)
class ModelFailure:
    index: int
    expected: Fraction
    actual: Extended


def verify_torus_model(model: TorusModel, values: Sequence[Extended], N: int
                       ) -> Union[Verified, ModelFailure]:
    if N >= len(values):
        raise ValueError(f"only {len(values)} values supplied for horizon {N}")
    for n, v in enumerate(model.states(N)):
        expected = model.value_at(v)
        if values[n] is INF or values[n] != expected:
            return ModelFailure(n, expected, values[n])
    return Verified(N)


def torus_model_from_values(values: Sequence[Extended], G: MultSubgroup
                            ) -> Union[TorusModel, NoFit]:
    """Trajectories, affine fit and model assembly in one step.

    A nontrivial torsion track becomes an extra parity coordinate of the state.
    """
    from .holonomic import CFiniteRecurrence, min_cfinite_annihilator

    traj = exponent_trajectories(values, G)
    m = len(G.generators)
    rows = [list(r) for r in traj.rows]
    with_sign = any(t < 0 for t in traj.torsion)
    if with_sign:
        rows = [r + [int(t < 0)] for r, t in zip(rows, traj.torsion)]
    e = len(rows[0])
    fit = fit_affine_exponent_model(rows)
    if isinstance(fit, NoFit):
        return fit
    Q = [[int(i == j) for j in range(e)] for i in range(m)]
    sign = [0] * e
    if with_sign:
        sign[-1] = 1
    word = None
    if len(rows) >= 4:
        orders = []
        for i in range(e):
            found = min_cfinite_annihilator([r[i] for r in rows])
            if isinstance(found, CFiniteRecurrence):
                orders.append(found.order)
        if len(orders) == e:
            word = max(orders, default=0)
    return build_torus_model(fit.A, fit.p, rows[0], Q, 1, G, sign, word)


# -- geometric forms ---------------------------------------------------------------


@dataclass(frozen=True)
class GeometricClass:
    residue: int
    alpha: Fraction
    beta: Fraction
    cutoff: int  # first class index n with a_{Ln+j} = alpha * beta**n


@dataclass(frozen=True)
class GeometricForm:
    period: int
    classes: tuple[GeometricClass, ...]

    def term(self, k: int) -> Fraction:
        c = self.classes[k % self.period]
        return c.alpha * c.beta ** (k // self.period)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "classes": [{"residue": c.residue, "alpha": format_rational(c.alpha),
                         "beta": format_rational(c.beta), "cutoff": c.cutoff}
                        for c in self.classes],
        }


def _geometric_run(seq: Sequence[Fraction], latest_cutoff: int):
    """``(cutoff, alpha, beta)`` for the longest geometric tail, if it starts early enough."""
    if len(seq) < 3 or seq[-1] == 0 or seq[-2] == 0:
        return None
    beta = seq[-1] / seq[-2]
    c = len(seq) - 2
    while c > 0 and seq[c - 1] != 0 and seq[c] / seq[c - 1] == beta:
        c -= 1
    if c > latest_cutoff or len(seq) - c < 3:
        return None
    return c, seq[c] / beta**c, beta


def _tail_start(length: int, tail) -> int:
    return math.ceil(length * (1 - Fraction(tail)))


def geometric_form(values: Sequence[RationalLike], L_max: int = DEFAULT_LMAX,
                   tail=DEFAULT_TAIL_FRACTION) -> Union[GeometricForm, NoneFound]:
    """Least period L with ``a_{Ln+j} = alpha_j beta_j**n`` on every residue class.

    Each class must be geometric on every index from ``tail_start`` on, where
    the last ``tail`` fraction of the data forms the tail.
    """
    vals = [as_rational(v) for v in values]
    start = _tail_start(len(vals), tail)
    for i in range(start, len(vals)):
        if vals[i] == 0:
            raise ZeroOnTail(i)
    for L in range(1, L_max + 1):
        classes = []
        for j in range(L):
            seq = vals[j::L]
            latest = max(0, -(-(start - j) // L))
            run = _geometric_run(seq, latest)
            if run is None:
                break
            c, alpha, beta = run
            classes.append(GeometricClass(j, alpha, beta, c))
        else:
            return GeometricForm(L, tuple(classes))
    return NoneFound(L_max)


# -- zero patterns -----------------------------------------------------------------


@dataclass(frozen=True)
class ZeroPattern:
    preperiod: int
    period: int
    pattern: tuple[bool, ...]  # zero indicator on one period starting at the preperiod
    horizon: int
    empirical: bool = True

    def to_json(self) -> dict:
        return {"preperiod": self.preperiod, "period": self.period,
                "zero_residues": [i for i, z in enumerate(self.pattern) if z],
                "horizon": self.horizon, "empirical": self.empirical}


@dataclass(frozen=True)
class Aperiodic:
    horizon: int


def zero_pattern(values: Sequence[Extended], horizon: Optional[int] = None
                 ) -> Union[ZeroPattern, Aperiodic]:
    """Least ``(s, L)`` (s first) making the zero indicator ``(s, L)``-periodic on ``[0, horizon]``."""
    if horizon is None:
        horizon = len(values) - 1
    z = [v is not INF and v == 0 for v in values[: horizon + 1]]
    best = None
    for L in range(1, horizon // 2 + 1):
        last_bad = -1
        for n in range(horizon - L, -1, -1):
            if z[n] != z[n + L]:
                last_bad = n
                break
        s = last_bad + 1
        if 2 * (s + L) <= horizon and (best is None or (s, L) < best):
            best = (s, L)
    if best is None:
        return Aperiodic(horizon)
    s, L = best
    return ZeroPattern(s, L, tuple(z[s:s + L]), horizon)


# -- rationality certificate -------------------------------------------------------


@dataclass(frozen=True)
class CertificateFailure:
    stage: str  # membership, zeros, form or verify
    index: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"stage": self.stage, "index": self.index, "detail": self.detail}


@dataclass(frozen=True)
class RationalClosedForm:
    numerator: tuple[Fraction, ...]  # lowest degree first
    denominator: tuple[Fraction, ...]
    period: int
    classes: tuple[GeometricClass, ...]
    prefix: tuple[Fraction, ...]  # the polynomial part, lowest degree first
    verified_terms: int

    def series(self, count: int) -> list[Fraction]:
        return series_coefficients(self.numerator, self.denominator, count)

    def to_string(self, var: str = "x") -> str:
        return f"({_poly_str(self.numerator, var)})/({_poly_str(self.denominator, var)})"

    def to_json(self) -> dict:
        return {
            "numerator": [format_rational(c) for c in self.numerator],
            "denominator": [format_rational(c) for c in self.denominator],
            "closed_form": self.to_string(),
            "period": self.period,
            "classes": [{"residue": c.residue, "alpha": format_rational(c.alpha),
                         "beta": format_rational(c.beta), "cutoff": c.cutoff}
                        for c in self.classes],
            "prefix": [format_rational(c) for c in self.prefix],
            "verified_terms": self.verified_terms,
        }


def _poly_str(cs: Sequence[Fraction], var: str) -> str:
    parts = []
    for k, c in enumerate(cs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        a = abs(c)
        coef = format_rational(a)
        body = coef if not mono else (mono if a == 1 else f"{coef}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def series_coefficients(num: Sequence[Fraction], den: Sequence[Fraction], count: int
                        ) -> list[Fraction]:
    """First ``count`` power-series coefficients of ``num/den`` (needs ``den[0] != 0``)."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator must not vanish at 0")
    out = []
    for k in range(count):
        acc = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        out.append(acc / den[0])
    return out


def _add_fractions(a, b):
    (n1, d1), (n2, d2) = a, b
    num = uadd(umul(n1, d2), umul(n2, d1))
    den = umul(d1, d2)
    return num, den


def _reduce_fraction(num, den):
    g = ugcd(num, den) if utrim(num) else [Fraction(1)]
    if len(g) > 1:
        num, den = udivmod(num, g)[0], udivmod(den, g)[0]
    if not utrim(num):
        return [], [Fraction(1)]
    c0 = den[0]
    return [c / c0 for c in num], [c / c0 for c in den]


def certify_rational(rec: PRecurrence, G: MultSubgroup, N: int = 200, L_max: int = DEFAULT_LMAX,
                     tail=DEFAULT_TAIL_FRACTION) -> Union[RationalClosedForm, CertificateFailure]:
    """Rational generating function for ``sum_n a_{p+n} x^n``, checked on N terms."""
    if N < 4 * L_max + 8:
        raise ValueError("N must be at least 4 * L_max + 8")
    terms = expand(rec, N - 1)
    for i, a in enumerate(terms):
        if a != 0 and not is_member(G, a):
            return CertificateFailure("membership", i, f"a_{i} = {format_rational(a)} is not in G")
    zp = zero_pattern(terms)
    if isinstance(zp, Aperiodic):
        return CertificateFailure("zeros", None, f"zero set not periodic on horizon {zp.horizon}")
    if zp.period > L_max:
        return CertificateFailure("zeros", None, f"zero period {zp.period} exceeds L_max")
    s, Lz = zp.preperiod, zp.period
    start = _tail_start(N, tail)
    chosen = None
    for L in range(Lz, L_max + 1, Lz):
        classes = []
        for j in range(L):
            first_n = max(0, -(-(s - j) // L))
            if zp.pattern[(L * first_n + j - s) % Lz]:
                classes.append(None)
                continue
            seq = terms[j::L]
            latest = max(first_n, -(-(start - j) // L))
            if any(x == 0 for x in seq[latest:]):
                break
            run = _geometric_run(seq, latest)
            if run is None:
                break
            c, alpha, beta = run
            classes.append(GeometricClass(j, alpha, beta, c))
        else:
            chosen = (L, classes)
            break
    if chosen is None:
        return CertificateFailure("form", None, f"no geometric form with period <= {L_max}")
    L, classes = chosen
    covered = set()
    num, den = [], [Fraction(1)]
    for j, c in enumerate(classes):
        if c is None:
            continue
        k0 = L * c.cutoff + j
        covered.update(range(k0, N, L))
        part_num = [Fraction(0)] * k0 + [terms[k0]]
        part_den = [Fraction(1)] + [Fraction(0)] * (L - 1) + [-c.beta]
        num, den = _add_fractions((num, den), (part_num, part_den))
    prefix = [Fraction(0)] * N
    for k in range(N):
        if k not in covered:
            prefix[k] = terms[k]
    prefix = utrim(prefix)
    num, den = _add_fractions((num, den), (prefix, [Fraction(1)]))
    num, den = _reduce_fraction(num, den)
    if series_coefficients(num, den, N) != terms:
        return CertificateFailure("verify", None, "closed form does not reproduce the terms")
    return RationalClosedForm(tuple(num), tuple(den), L,
                              tuple(c for c in classes if c is not None), tuple(prefix), N)
