"""Exact arithmetic dynamics over the rationals: orbits, multiplicative groups,
holonomic recurrences and the structure of sequences that meet a finitely
generated subgroup of Q*."""

from .dynamics import INF, RationalSelfMap, orbit, orbit_sequence, torus_map, vanishing_ideal
from .exact import PrimeSet, ValVector, sunit_factor, valuation, weil_height
from .holonomic import (
    CFiniteRecurrence,
    DFiniteODE,
    PRecurrence,
    expand,
    fatou_normalize,
    hadamard,
    min_cfinite_annihilator,
    ode_to_recurrence,
    recurrence_to_dynsys,
)
from .multgroup import (
    build_group,
    contains,
    decompose,
    height_lower_constant,
    is_member,
    radical_contains,
)
from .parse import parse_expression, parse_system

__all__ = [
    "INF",
    "CFiniteRecurrence",
    "DFiniteODE",
    "PRecurrence",
    "PrimeSet",
    "RationalSelfMap",
    "ValVector",
    "build_group",
    "contains",
    "decompose",
    "expand",
    "fatou_normalize",
    "hadamard",
    "height_lower_constant",
    "is_member",
    "min_cfinite_annihilator",
    "ode_to_recurrence",
    "orbit",
    "orbit_sequence",
    "parse_expression",
    "parse_system",
    "radical_contains",
    "recurrence_to_dynsys",
    "sunit_factor",
    "torus_map",
    "valuation",
    "vanishing_ideal",
    "weil_height",
]

__version__ = "0.1.0"
