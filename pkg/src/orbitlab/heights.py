"""Height and valuation growth along sequences.

Growth is only ever witnessed on a finite horizon, so every report carries
the horizon and the fixed thresholds it was classified with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import TooShort, ZeroValue
from .exact import RationalLike, as_rational, format_rational, height_int, valuation

STABLE_RELATIVE_VARIATION = 0.10
MIN_ENTRIES = 32

GROWTH_CLASSES = ("Bounded", "Linear", "NLogN", "Subquadratic", "QuadraticOrMore")


def height_sequence(values: Sequence[RationalLike]) -> list[int]:
    """Exact heights ``max(|num|, den)``."""
    out = []
    for i, v in enumerate(values):
        v = as_rational(v)
        if v == 0:
            raise ZeroValue(i)
        out.append(height_int(v))
    return out


@dataclass(frozen=True)
class GrowthReport:
    label: str
    horizon: int
    ratio_linear: tuple[float, float]  # (min, max) of envelope / n over the last quarter
    ratio_nlogn: tuple[float, float]
    ratio_quadratic: tuple[float, float]
    threshold: float = STABLE_RELATIVE_VARIATION

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "horizon": self.horizon,
            "ratio_linear": list(self.ratio_linear),
            "ratio_nlogn": list(self.ratio_nlogn),
            "ratio_quadratic": list(self.ratio_quadratic),
            "thresholds": {"relative_variation": self.threshold, "window": "last quarter",
                           "envelope": "running max of log height"},
        }


def _variation(xs: Sequence[float]) -> float:
    hi, lo = max(xs), min(xs)
    if hi <= 0:
        return math.inf
    return (hi - lo) / hi


def growth_classify(heights: Sequence[int], horizon: Optional[int] = None) -> GrowthReport:
    """Classify the growth of ``log H_n`` on its running-max envelope.

    Bounded when the second half never exceeds the first half's maximum.
    Otherwise the ratios ``E_n/n``, ``E_n/(n log n)`` and ``E_n/n^2`` of the
    envelope ``E_n = max_{k<=n} log H_k`` are examined over the last quarter;
    among those whose relative variation is below 10% the flattest names the
    class (Linear, NLogN, QuadraticOrMore).  A nondecreasing ``E_n/n^2`` also counts
    as QuadraticOrMore; anything else is Subquadratic.
    """
    if len(heights) < MIN_ENTRIES:
        raise TooShort(f"need at least {MIN_ENTRIES} heights, got {len(heights)}")
    if horizon is None:
        horizon = len(heights) - 1
    hs = list(heights[: horizon + 1])
    n_tot = len(hs)
    half, quarter = n_tot // 2, (3 * n_tot) // 4
    if max(hs[half:]) <= max(hs[:half]):
        label = "Bounded"
    else:
        label = None
    env = []
    cur = 0.0
    for H in hs:
        cur = max(cur, math.log(H))
        env.append(cur)
    idx = range(max(quarter, 2), n_tot)
    r1 = [env[n] / n for n in idx]
    r2 = [env[n] / (n * math.log(n)) for n in idx]
    r3 = [env[n] / (n * n) for n in idx]
    if label is None:
        # several ratios can look stable over a short quarter (n and n log n
        # differ only by a slowly varying factor); the flattest one wins
        stable = [(_variation(r), name) for r, name in
                  ((r1, "Linear"), (r2, "NLogN"), (r3, "QuadraticOrMore"))
                  if _variation(r) < STABLE_RELATIVE_VARIATION]
        if stable:
            label = min(stable)[1]
        elif all(b >= a for a, b in zip(r3, r3[1:])):
            label = "QuadraticOrMore"
        else:
            label = "Subquadratic"
    return GrowthReport(label, horizon, (min(r1), max(r1)), (min(r2), max(r2)), (min(r3), max(r3)))


@dataclass(frozen=True)
class ValuationGrowth:
    prime: int
    slope: Fraction  # sup of |v_p(a_n)| / max(n, 1) over the tail
    bound_slope: Fraction
    bound_offset: Fraction
    linear: bool  # True when |v_p(a_n)| <= bound_slope * n + bound_offset on the whole horizon
    first_violation: Optional[int]
    horizon: int

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "slope": format_rational(self.slope),
            "bound": {"slope": format_rational(self.bound_slope),
                      "offset": format_rational(self.bound_offset)},
            "verdict": "linear" if self.linear else "exceeds-linear",
            "first_violation": self.first_violation,
            "horizon": self.horizon,
        }


def valuation_growth(values: Sequence[RationalLike], p: int) -> ValuationGrowth:
    """Check ``|v_p(a_n)| = O(n)`` on the horizon.

    The bound ``C n + B`` is the upper envelope of the first half (``C`` the
    largest ``|v_p(a_n)|/n``, ``B`` the smallest offset covering the first
    half); it is then checked exactly against every remaining term.
    """
    vs = []
    for i, v in enumerate(values):
        v = as_rational(v)
        if v == 0:
            raise ZeroValue(i)
        vs.append(abs(valuation(p, v)))
    n_tot = len(vs)
    if n_tot < 4:
        raise TooShort("need at least 4 values")
    half = max(n_tot // 2, 2)
    tail = range(half, n_tot)
    slope = max(Fraction(vs[n], max(n, 1)) for n in tail)
    C = max(Fraction(vs[n], n) for n in range(1, half))
    B = max(Fraction(vs[n]) - C * n for n in range(half))
    violation = next((n for n in range(n_tot) if vs[n] > C * n + B), None)
    return ValuationGrowth(p, slope, C, B, violation is None, violation, n_tot - 1)
